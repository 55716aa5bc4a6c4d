"""Phantom types for indices and names.

A Level is a 1-based basis index, an Order is a truncation order N. They are
plain ints at runtime, but mypy keeps ``compress(system, Order(12))`` from
silently receiving a level index.
"""

from typing import NewType

Level = NewType("Level", int)
Order = NewType("Order", int)
SystemName = NewType("SystemName", str)

Transition = tuple[int, int]

__all__ = ["Level", "Order", "SystemName", "Transition"]
