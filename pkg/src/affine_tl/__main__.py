"""Entry point for ``python -m affine_tl``."""

from .cli import main

if __name__ == "__main__":
    main()
