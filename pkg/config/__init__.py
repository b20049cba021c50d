"""
Configuración de ArtOwen
"""
