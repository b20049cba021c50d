"""
Enumeración de las muestras de un sampler global que caen en un píxel.

Se invierte el scrambling de los k bits del píxel en cada eje y luego se
resuelve el sistema GF(2) que imponen las k filas superiores de las matrices
generadoras sobre los bits del índice; las variables libres se enumeran.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import IndexOutOfRangeError, SingularMatrixError
from src.core.gf2 import AffineSolver
from src.core.logger import logger
from src.sampling.scrambler import ArtOwenScrambler
from src.sampling.sobol import GeneratorMatrix


def _top_rows(matrix: GeneratorMatrix, k: int, n_index_bits: int) -> List[int]:
    index_mask = (1 << n_index_bits) - 1
    return [row & index_mask for row in matrix.rows()[:k]]


@dataclass(frozen=True)
class PixelEnumerator:
    """
    Sistema precalculado para una rejilla 2^k x 2^k y los primeros `count` índices.

    Attributes:
        scrambler: Scrambler ART-Owen (None = sin scrambling)
        matrices: Matrices generadoras de las dimensiones 0 y 1
        grid_log2: k
        count: Número de muestras globales consideradas
    """

    scrambler: Optional[ArtOwenScrambler]
    matrices: Tuple[GeneratorMatrix, ...]
    grid_log2: int
    count: int
    _solver: AffineSolver = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        matrices = tuple(self.matrices)
        if len(matrices) < 2:
            raise ValueError("Se necesitan las matrices de las dimensiones 0 y 1")
        object.__setattr__(self, "matrices", matrices[:2])
        m = matrices[0].m
        if not 0 <= self.grid_log2 <= m:
            raise ValueError(f"grid_log2 fuera de 0..{m}: {self.grid_log2}")
        if not 1 <= self.count <= (1 << m):
            raise IndexOutOfRangeError(f"count fuera de 1..2^{m}: {self.count}")
        if self.scrambler is not None and self.scrambler.m != m:
            raise ValueError("El scrambler y las matrices usan profundidades de bits distintas")

        k = self.grid_log2
        rows = _top_rows(matrices[0], k, self.index_bits) + _top_rows(matrices[1], k, self.index_bits)
        solver = AffineSolver.from_rows(rows, self.index_bits)
        if self.index_bits >= 2 * k and solver.rank < 2 * k:
            raise SingularMatrixError(
                f"Sistema de píxel singular: rango {solver.rank} < {2 * k} con {self.index_bits} bits de índice"
            )
        object.__setattr__(self, "_solver", solver)

    @property
    def m(self) -> int:
        return self.matrices[0].m

    @property
    def index_bits(self) -> int:
        return (self.count - 1).bit_length()

    def original_prefix(self, pixel_coord: int, dim: int) -> int:
        """Prefijo de k bits previo al scrambling que aterriza en `pixel_coord`."""
        k = self.grid_log2
        if self.scrambler is None or k == 0:
            return pixel_coord
        shift = self.m - k
        return self.scrambler.unscramble(pixel_coord << shift, dim) >> shift

    def enumerate(self, pixel: Tuple[int, int]) -> np.ndarray:
        """Índices i < count cuyo punto scrambleado cae en el píxel, en orden creciente."""
        px, py = (int(c) for c in pixel)
        k = self.grid_log2
        if not (0 <= px < (1 << k) and 0 <= py < (1 << k)):
            raise IndexOutOfRangeError(f"Píxel fuera de la rejilla 2^{k}: ({px}, {py})")

        prefixes = (self.original_prefix(px, 0), self.original_prefix(py, 1))
        rhs = 0
        for axis, prefix in enumerate(prefixes):
            for r in range(k):
                if (prefix >> (k - 1 - r)) & 1:
                    rhs |= 1 << (axis * k + r)

        base = self._solver.particular(rhs)
        if base is None:
            return np.zeros(0, dtype=np.uint64)

        solutions = np.array([base], dtype=np.uint64)
        for vec in self._solver.null_basis:
            solutions = np.concatenate([solutions, solutions ^ np.uint64(vec)])
        solutions = solutions[solutions < np.uint64(self.count)]
        return np.sort(solutions)


def enumerate_pixel_samples(
    s: Optional[ArtOwenScrambler],
    matrices: Sequence[GeneratorMatrix],
    pixel: Tuple[int, int],
    grid_log2: int,
    count: int,
) -> List[int]:
    """
    Índices de las primeras `count` muestras globales dentro del píxel (px, py).

    Raises:
        SingularMatrixError: las filas superiores de las matrices no son independientes
    """
    enumerator = PixelEnumerator(s, tuple(matrices), grid_log2, count)
    indices = enumerator.enumerate(pixel)
    logger.debug(f"Píxel {pixel}: {indices.size} muestras de {count}")
    return [int(i) for i in indices]
