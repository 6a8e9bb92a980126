"""Entry point for python -m joint_mixreg."""

import sys

from joint_mixreg.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
