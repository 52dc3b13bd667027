"""
utils/ — Utilidades compartidas por todos los modulos.

Modulos:
- logger.py      → Logging con Rich a stderr y archivo rotativo
- validators.py  → Validación de parámetros del CLI
"""
