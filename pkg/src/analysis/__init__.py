"""
Análisis de calidad: espectros, redes, radio de conflicto, zoneplates y convergencia.
"""
