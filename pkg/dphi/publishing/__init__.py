"""
publishing/ — Salida de resultados.

Modulos:
- formatter.py → JSON (schema 1), CSV y tabla rich
"""
