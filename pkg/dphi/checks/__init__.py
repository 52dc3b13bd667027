"""
checks/ — Chequeos numéricos que `dphi verify` puede ejecutar.

Modulos:
    base.py       -> Interfaz base (BaseCheck ABC, CheckResult)
    registry.py   -> Registro y suites
    cov.py        -> Cambio de variable
    kernel.py     -> Propiedades reproductoras
    structure.py  -> Identidades exactas y convergencia de Galerkin
"""
