"""
dphi — Operadores de composición-diferenciación D_φ f = f′∘φ sobre
espacios de Dirichlet con peso D_α, 0 < α < 1.

Este paquete contiene:
- core/        → Series, espacio, cuadratura, mapeos, conteo, operador, diagnósticos
- checks/      → Chequeos de verificación (suites cov, kernel, structure)
- publishing/  → Salida JSON/CSV/tabla
- utils/       → Logger y validadores

Uso:
    python -m dphi norm --map dilation:0.5 --alpha 0.5
    python -m dphi diagnose --map lens:0.1 --alpha 0.5
    python -m dphi verify --suite all
"""

__version__ = "1.0.0"
