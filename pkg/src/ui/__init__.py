"""
CLI de ArtOwen: configuración de ejecución y comandos
"""
