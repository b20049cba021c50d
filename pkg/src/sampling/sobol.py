"""
Secuencia de Sobol sin aleatorizar en punto fijo de m bits.

Cada dimensión es una matriz generadora sobre GF(2); la coordenada d del
punto i es el XOR de las columnas de la matriz d seleccionadas por los bits
encendidos de i. La columna j es el número de dirección del bit j del índice,
alineado al bit más significativo.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import IO, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.bits import bit_mask, check_bit_depth, reverse_bits, to_unit
from src.core.exceptions import DirectionNumbersError, IndexOutOfRangeError, SingularMatrixError
from src.core.gf2 import gf2_rank
from src.core.logger import logger


@dataclass(frozen=True)
class GeneratorMatrix:
    """
    Matriz generadora de una dimensión.

    Attributes:
        columns: m palabras de m bits; columns[j] corresponde al bit j del índice
        m: Profundidad de bits
    """

    columns: Tuple[int, ...]
    m: int = 32

    def __post_init__(self) -> None:
        check_bit_depth(self.m)
        if len(self.columns) != self.m:
            raise ValueError(f"Se esperaban {self.m} columnas, hay {len(self.columns)}")
        limit = 1 << self.m
        for j, column in enumerate(self.columns):
            if not 0 < column < limit:
                raise ValueError(f"Columna {j} nula o fuera de rango: {column:#x}")
        if not self.is_invertible():
            raise SingularMatrixError("La matriz generadora no es invertible en GF(2)")

    @classmethod
    def identity(cls, m: int = 32) -> "GeneratorMatrix":
        """Dimensión 0: van der Corput (inversión de bits)."""
        return cls(tuple(1 << (m - 1 - j) for j in range(m)), m)

    @classmethod
    def pascal(cls, m: int = 32) -> "GeneratorMatrix":
        """Dimensión 1: matriz de Pascal triangular superior módulo 2."""
        return cls.from_direction_integers(1, 0, (1,), m)

    @classmethod
    def from_direction_integers(
        cls, degree: int, coefficients: int, m_values: Sequence[int], m: int = 32
    ) -> "GeneratorMatrix":
        """
        Construye la matriz con la recurrencia de Sobol/Joe-Kuo.

        Args:
            degree: Grado s del polinomio primitivo
            coefficients: Entero a con los coeficientes interiores del polinomio
            m_values: Enteros de dirección iniciales m_1..m_s (impares, m_k < 2^k)
            m: Profundidad de bits
        """
        if len(m_values) < degree:
            raise ValueError(f"Se necesitan {degree} valores m_i, hay {len(m_values)}")
        directions: List[int] = []
        for k in range(m):
            if k < degree:
                value = m_values[k] << (m - 1 - k)
            else:
                value = directions[k - degree] ^ (directions[k - degree] >> degree)
                for i in range(1, degree):
                    if (coefficients >> (degree - 1 - i)) & 1:
                        value ^= directions[k - i]
            directions.append(value & bit_mask(m))
        return cls(tuple(directions), m)

    def rows(self) -> List[int]:
        """Filas como bitsets sobre los bits del índice (fila 0 = bit más significativo)."""
        out = []
        for r in range(self.m):
            position = self.m - 1 - r
            row = 0
            for j, column in enumerate(self.columns):
                if (column >> position) & 1:
                    row |= 1 << j
            out.append(row)
        return out

    def is_invertible(self) -> bool:
        return gf2_rank(self.rows(), self.m) == self.m

    def as_array(self) -> np.ndarray:
        return np.asarray(self.columns, dtype=np.uint64)


@dataclass(frozen=True)
class SamplePoint:
    """Punto de muestreo en punto fijo: coordenada = entero / 2^m."""

    coords: Tuple[int, ...]
    m: int = 32

    def __post_init__(self) -> None:
        limit = 1 << self.m
        if any(not 0 <= c < limit for c in self.coords):
            raise IndexOutOfRangeError(f"Coordenada fuera de {self.m} bits: {self.coords}")

    def to_unit(self) -> Tuple[float, ...]:
        return tuple(c / float(1 << self.m) for c in self.coords)


def _check_index(index: int, m: int) -> int:
    if not 0 <= index < (1 << m):
        raise IndexOutOfRangeError(f"Índice fuera de rango para m={m}: {index}")
    return index


def van_der_corput(index: int, m: int = 32) -> int:
    """
    Inversión de bits de `index` dentro de una palabra de m bits.

    Examples:
        van_der_corput(1, 4) == 8
        van_der_corput(6, 4) == 6
    """
    return reverse_bits(_check_index(int(index), m), m)


def sobol_point(index: int, matrices: Sequence[GeneratorMatrix]) -> SamplePoint:
    """Punto `index` de la secuencia definida por `matrices` (producto matriz-vector en GF(2))."""
    if not matrices:
        raise ValueError("Se necesita al menos una matriz generadora")
    m = matrices[0].m
    _check_index(int(index), m)
    coords = []
    for matrix in matrices:
        value = 0
        i = int(index)
        j = 0
        while i:
            if i & 1:
                value ^= matrix.columns[j]
            i >>= 1
            j += 1
        coords.append(value)
    return SamplePoint(tuple(coords), m)


def sobol_points(
    indices: Union[int, Iterable[int], np.ndarray], matrices: Sequence[GeneratorMatrix]
) -> np.ndarray:
    """
    Versión vectorizada de sobol_point.

    Args:
        indices: Un entero n (primeros n puntos) o un arreglo de índices
        matrices: Matrices generadoras, una por dimensión

    Returns:
        Arreglo uint64 de forma (n, dims) con palabras de m bits
    """
    if not matrices:
        raise ValueError("Se necesita al menos una matriz generadora")
    m = matrices[0].m
    if isinstance(indices, (int, np.integer)):
        idx = np.arange(int(indices), dtype=np.uint64)
    else:
        idx = np.asarray(indices, dtype=np.uint64).ravel()
    if idx.size and int(idx.max()) >= (1 << m):
        raise IndexOutOfRangeError(f"Índices fuera de rango para m={m}")

    columns = np.stack([mat.as_array() for mat in matrices], axis=0)  # (dims, m)
    out = np.zeros((idx.size, len(matrices)), dtype=np.uint64)
    n_bits = int(idx.max()).bit_length() if idx.size else 0
    one = np.uint64(1)
    for j in range(n_bits):
        selected = (idx >> np.uint64(j)) & one
        out ^= selected[:, None] * columns[None, :, j]
    return out


def sobol_unit_points(n: int, matrices: Sequence[GeneratorMatrix]) -> np.ndarray:
    """Primeros n puntos como fracciones en [0, 1)."""
    return to_unit(sobol_points(n, matrices), matrices[0].m)


def _read_lines(source: Union[str, Path, IO]) -> List[str]:
    if hasattr(source, "read"):
        content = source.read()
    else:
        content = Path(source).read_bytes()
    if isinstance(content, bytes):
        content = content.decode("utf-8")
    return content.splitlines()


def load_direction_numbers(
    source: Union[str, Path, IO, None] = None,
    dims: Optional[int] = None,
    m: int = 32,
) -> List[GeneratorMatrix]:
    """
    Carga matrices generadoras desde el formato de texto de Joe-Kuo.

    Formato: una cabecera y luego un registro por línea `d s a m_1 .. m_s`.
    El registro d corresponde a la dimensión d-1 de la librería; las
    dimensiones 0 y 1 están siempre disponibles sin archivo.

    Args:
        source: Ruta o flujo (bytes o texto); None usa solo las integradas
        dims: Número de dimensiones pedidas (por defecto 2 sin archivo, o todas)
        m: Profundidad de bits

    Returns:
        Lista de matrices generadoras, una por dimensión

    Raises:
        DirectionNumbersError: registro mal formado (indica la línea)
        SingularMatrixError: matriz resultante no invertible
    """
    matrices = [GeneratorMatrix.identity(m), GeneratorMatrix.pascal(m)]
    if source is None:
        wanted = 2 if dims is None else dims
        if wanted > 2:
            raise DirectionNumbersError(f"Sin archivo solo hay 2 dimensiones integradas, se pidieron {wanted}")
        return matrices[:wanted]

    lines = _read_lines(source)
    for line_no, raw in enumerate(lines, start=1):
        if dims is not None and len(matrices) >= dims:
            break
        text = raw.strip()
        if line_no == 1 or not text:
            continue  # cabecera
        fields = text.split()
        try:
            values = [int(f) for f in fields]
        except ValueError:
            raise DirectionNumbersError(f"campo no numérico en {text!r}", line_no)
        if len(values) < 4:
            raise DirectionNumbersError(f"registro incompleto {text!r}", line_no)
        d, degree, coefficients, m_values = values[0], values[1], values[2], values[3:]
        if d < 2 or degree < 1 or len(m_values) != degree:
            raise DirectionNumbersError(f"registro inconsistente {text!r}", line_no)
        for k, mk in enumerate(m_values, start=1):
            if mk % 2 == 0 or mk >= (1 << k):
                raise DirectionNumbersError(f"m_{k}={mk} debe ser impar y menor que 2^{k}", line_no)
        if d == 2:
            continue  # Pascal, ya integrada
        if d != len(matrices) + 1:
            raise DirectionNumbersError(f"dimensión {d} fuera de orden", line_no)
        matrices.append(GeneratorMatrix.from_direction_integers(degree, coefficients, m_values, m))

    if dims is not None and len(matrices) < dims:
        raise DirectionNumbersError(f"El archivo solo define {len(matrices)} dimensiones, se pidieron {dims}")
    logger.info(f"Números de dirección cargados: {len(matrices)} dimensiones (m={m})")
    return matrices


@lru_cache(maxsize=32)
def default_matrices(dims: int = 2, m: int = 32, path: Optional[str] = None) -> Tuple[GeneratorMatrix, ...]:
    """Matrices por defecto (integradas o del archivo configurado), cacheadas."""
    if dims <= 2 and path is None:
        return tuple(load_direction_numbers(None, dims, m))
    return tuple(load_direction_numbers(path, dims, m))
