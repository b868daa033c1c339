"""Entry point for `python -m ptlab`."""
from ptlab.cli import main

if __name__ == "__main__":
    main()
