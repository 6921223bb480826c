from __future__ import annotations

from numidx.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
