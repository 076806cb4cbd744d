#!/usr/bin/env python3
"""
Runner script for the Domination Kernelizer.

Runs one subcommand (kernelize, verify, generate, decompose) and exits with its exit code.
"""
import sys
from src.main import main
from src.utils.logger import setup_logger

logger = setup_logger()

if __name__ == "__main__":
    try:
        sys.exit(main())
    except Exception as e:
        logger.error(f"Error running Domination Kernelizer: {str(e)}")
        sys.exit(1)
