"""Module entry point so ``python -m dlps`` behaves like the installed CLI."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
