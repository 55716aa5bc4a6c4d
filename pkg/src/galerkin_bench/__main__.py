from galerkin_bench.cli import main

raise SystemExit(main())
