#!/usr/bin/env python3
"""
Main entry point for the volut command line.
"""

from volut.cli import main

if __name__ == "__main__":
    main()
