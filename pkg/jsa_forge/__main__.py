"""Allow ``python -m jsa_forge``."""

from .jsa_forge_cli import main

if __name__ == "__main__":
    main()
