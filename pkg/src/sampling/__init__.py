"""
Muestreo: secuencia de Sobol, gramáticas, scrambling ART-Owen y enumeración por píxel.
"""
