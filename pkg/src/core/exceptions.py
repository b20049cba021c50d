"""
Jerarquía de excepciones de ArtOwen.

Los errores de entrada también heredan de ValueError, de modo que el código
que ya captura ValueError sigue funcionando.
"""

from typing import Optional


class ArtOwenError(Exception):
    """Raíz de todos los errores de la librería."""


class IndexOutOfRangeError(ArtOwenError, ValueError):
    """Índice o coordenada fuera del rango de m bits."""


class DirectionNumbersError(ArtOwenError, ValueError):
    """Fallo al interpretar un archivo de números de dirección."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        prefix = f"línea {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class SingularMatrixError(ArtOwenError, ValueError):
    """Matriz generadora (o sistema de restricciones) no invertible en GF(2)."""


class GrammarError(ArtOwenError, ValueError):
    """Gramática mal formada."""


class GrammarConstructionError(GrammarError):
    """No se encontró una gramática que cumpla las restricciones pedidas."""


class DepthGuardError(ArtOwenError, ValueError):
    """Profundidad por encima del límite de memoria permitido."""


class FormatError(ArtOwenError, ValueError):
    """Archivo de texto con formato inválido."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        prefix = f"línea {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class InfeasibleTreeError(ArtOwenError):
    """
    El sistema GF(2) no tiene solución para el árbol objetivo.

    Attributes:
        row: Fila (bit del árbol) donde se detectó la inconsistencia
        level: Nivel del árbol de esa fila
        prefix: Prefijo original del nodo dentro del nivel
    """

    def __init__(self, row: int, level: int, prefix: int) -> None:
        self.row = row
        self.level = level
        self.prefix = prefix
        super().__init__(
            f"Sistema inconsistente en la fila {row} (nivel {level}, prefijo {prefix})"
        )


class VerificationError(ArtOwenError):
    """Una comprobación pedida por el usuario no se cumplió."""
