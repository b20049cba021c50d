"""
Formatos de archivo y checkpoints de ArtOwen
"""
