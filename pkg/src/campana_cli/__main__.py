"""Allow running as python -m campana_cli."""

from campana_cli.cli import main

if __name__ == "__main__":
    main()
