"""
Solver GF(2): mapa de bits datos -> árbol y reproducción de árboles objetivo.
"""
