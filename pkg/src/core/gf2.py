"""
Álgebra lineal GF(2) pequeña sobre enteros usados como bitsets.

Una fila es un int cuyo bit j es el coeficiente de la incógnita j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.core.bits import parity


def gf2_rank(rows: Sequence[int], n_cols: int) -> int:
    """Rango sobre GF(2) por eliminación gaussiana."""
    work = list(rows)
    rank = 0
    row_idx = 0
    for col in range(n_cols):
        pivot = None
        for r in range(row_idx, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for r in range(len(work)):
            if r != row_idx and ((work[r] >> col) & 1):
                work[r] ^= work[row_idx]
        rank += 1
        row_idx += 1
        if row_idx == len(work):
            break
    return rank


@dataclass(frozen=True)
class AffineSolver:
    """
    Forma escalonada reducida de A x = b, precalculada una sola vez para
    resolver con muchos lados derechos b distintos.

    `combos[t]` registra qué filas originales se sumaron para formar la fila
    reducida t; el lado derecho transformado es parity(combos[t] & b).
    """

    n_cols: int
    pivot_cols: Tuple[int, ...]
    pivot_rows: Tuple[int, ...]
    pivot_combos: Tuple[int, ...]
    zero_combos: Tuple[int, ...]
    null_basis: Tuple[int, ...]

    @classmethod
    def from_rows(cls, rows: Sequence[int], n_cols: int) -> "AffineSolver":
        work = list(rows)
        combos = [1 << i for i in range(len(work))]
        pivot_cols: List[int] = []
        row_idx = 0
        for col in range(n_cols):
            pivot = None
            for r in range(row_idx, len(work)):
                if (work[r] >> col) & 1:
                    pivot = r
                    break
            if pivot is None:
                continue
            work[row_idx], work[pivot] = work[pivot], work[row_idx]
            combos[row_idx], combos[pivot] = combos[pivot], combos[row_idx]
            for r in range(len(work)):
                if r != row_idx and ((work[r] >> col) & 1):
                    work[r] ^= work[row_idx]
                    combos[r] ^= combos[row_idx]
            pivot_cols.append(col)
            row_idx += 1
            if row_idx == len(work):
                break

        rank = len(pivot_cols)
        pivot_set = set(pivot_cols)
        basis = []
        for free in range(n_cols):
            if free in pivot_set:
                continue
            vec = 1 << free
            for t, col in enumerate(pivot_cols):
                if (work[t] >> free) & 1:
                    vec |= 1 << col
            basis.append(vec)

        return cls(
            n_cols=n_cols,
            pivot_cols=tuple(pivot_cols),
            pivot_rows=tuple(work[:rank]),
            pivot_combos=tuple(combos[:rank]),
            zero_combos=tuple(combos[rank:]),
            null_basis=tuple(basis),
        )

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    def particular(self, rhs: int) -> Optional[int]:
        """
        Solución particular (variables libres en cero) o None si el sistema
        es inconsistente para este lado derecho.
        """
        for combo in self.zero_combos:
            if parity(combo & rhs):
                return None
        solution = 0
        for col, combo in zip(self.pivot_cols, self.pivot_combos):
            if parity(combo & rhs):
                solution |= 1 << col
        return solution
