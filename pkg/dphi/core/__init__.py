"""
core/ — El núcleo numérico de dphi.

Modulos:
    series.py       -> Series de potencias truncadas
    quadrature.py   -> Cuadratura tensorial en el disco
    space.py        -> Espacio D_α: normas, núcleos
    maps.py         -> Catalogo de auto-mapeos y spec strings
    counting.py     -> Función de conteo N_φ,α y cambio de variable
    operator.py     -> Matriz, normas y Hilbert-Schmidt de D_φ
    diagnostics.py  -> Perfiles radiales y veredictos
    errors.py       -> Jerarquía de excepciones
"""
