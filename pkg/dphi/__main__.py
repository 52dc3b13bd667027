"""
__main__.py — Permite ejecutar dphi como módulo.

    python -m dphi norm --map dilation:0.5
"""

from dphi.cli import main

if __name__ == "__main__":
    main()
