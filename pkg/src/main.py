#!/usr/bin/env python3
"""
Main entry point for the boundstates project.

Usage:
    python -m src.main spectrum --g1 -10 --g2 0.3 --nmax 2
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
