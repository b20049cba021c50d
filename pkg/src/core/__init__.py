"""
Componentes base de ArtOwen: logging, excepciones, bits y GF(2)
"""
