"""Entry point for robust_cic module. Enables: python -m robust_cic"""

from .cli import main

if __name__ == "__main__":
    main()
