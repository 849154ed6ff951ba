"""Command-line entry point for emiclean; same as the `emiclean` console script."""

import sys

from emiclean.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
