"""
ArtOwen - Scrambling de Owen dirigido por gramáticas
"""

__version__ = "1.0.0"
