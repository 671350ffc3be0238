"""CLI entry point for sftpressure

This module allows sftpressure to be invoked as:
    python -m sftpressure
    sftpressure (after installation)
"""

from sftpressure.cli import main

if __name__ == "__main__":
    main()
