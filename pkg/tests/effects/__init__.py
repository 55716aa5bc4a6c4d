"""Tests for effect types (IO, Result, ErrorDetails)."""
