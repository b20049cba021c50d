"""
Mapa de bits GF(2) entre los datos almacenados y los bits de volteo del árbol.

Filas: bits del árbol (nivel 0 primero, dentro de un nivel por prefijo
original), fila = 2^nivel - 1 + prefijo. Columnas: bits de datos agrupados
por significancia y luego por símbolo, columna = bit * N + símbolo.

El nodo (nivel l, camino p) con ancestro j que lleva el símbolo s recibe la
contribución del bit l - j del vector de s.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.core.exceptions import DepthGuardError, InfeasibleTreeError
from src.core.logger import logger, log_function_call
from src.sampling.grammar import Grammar
from src.sampling.scrambler import ExplicitTree, ScrambleData

MAX_SYSTEM_DEPTH = 16


def row_index(level: int, prefix: int) -> int:
    return (1 << level) - 1 + prefix


def row_position(row: int) -> Tuple[int, int]:
    """Inversa de row_index: (nivel, prefijo)."""
    level = (row + 1).bit_length() - 1
    return level, row - ((1 << level) - 1)


@dataclass(frozen=True)
class Gf2System:
    """
    Matriz de bits densa con filas en palabras de 64 bits.

    Attributes:
        grammar: Gramática que generó el sistema
        depth: Profundidad del árbol
        words: Arreglo uint64 (filas, ceil(cols / 64)); bit c de la fila = columna c
    """

    grammar: Grammar
    depth: int
    words: np.ndarray = field(repr=False, compare=False)

    @property
    def n_rows(self) -> int:
        return (1 << self.depth) - 1

    @property
    def n_cols(self) -> int:
        return self.grammar.n_symbols * self.depth

    def column(self, symbol: int, bit: int) -> int:
        return bit * self.grammar.n_symbols + symbol

    def dense(self) -> np.ndarray:
        """Matriz uint8 (filas, columnas) de ceros y unos."""
        raw = np.ascontiguousarray(self.words.astype("<u8")).view(np.uint8)
        bits = np.unpackbits(raw, axis=1, bitorder="little")
        return bits[:, :self.n_cols]

    def row_int(self, row: int) -> int:
        value = 0
        for w, word in enumerate(self.words[row]):
            value |= int(word) << (64 * w)
        return value

    def row_ints(self) -> List[int]:
        return [self.row_int(r) for r in range(self.n_rows)]

    def rank(self) -> int:
        """Rango sobre GF(2) (inserción incremental en una base por pivote)."""
        basis: Dict[int, int] = {}
        for row in self.row_ints():
            while row:
                pivot = row.bit_length() - 1
                if pivot not in basis:
                    basis[pivot] = row
                    break
                row ^= basis[pivot]
        return len(basis)


@log_function_call
def build_bit_map(g: Grammar, depth: int) -> Gf2System:
    """
    Construye el sistema por recorrido simbólico del árbol.

    Raises:
        DepthGuardError: depth > 16
    """
    if depth > MAX_SYSTEM_DEPTH:
        raise DepthGuardError(f"Profundidad {depth} supera el límite de {MAX_SYSTEM_DEPTH} del sistema GF(2)")
    if depth < 0:
        raise ValueError("La profundidad debe ser >= 0")

    n = g.n_symbols
    n_rows = (1 << depth) - 1
    n_words = max(1, -(-(n * depth) // 64))
    words = np.zeros((n_rows, n_words), dtype=np.uint64)

    # ancestors[p, j] = símbolo del ancestro j en el camino p
    ancestors = np.array([[g.start]], dtype=np.intp)
    for level in range(depth):
        width = ancestors.shape[0]
        rows = row_index(level, 0) + np.arange(width)
        bit = level - np.arange(level + 1)  # significancia de cada ancestro
        cols = bit[None, :] * n + ancestors
        np.bitwise_or.at(
            words,
            (np.repeat(rows, level + 1), (cols // 64).reshape(-1)),
            np.left_shift(np.uint64(1), (cols % 64).reshape(-1).astype(np.uint64)),
        )
        children = g.table[ancestors[:, -1]].reshape(-1)
        ancestors = np.concatenate([np.repeat(ancestors, 2, axis=0), children[:, None]], axis=1)

    logger.debug(f"Sistema GF(2): {n_rows} filas x {n * depth} columnas")
    return Gf2System(g, depth, words)


@dataclass(frozen=True)
class UtilizationReport:
    """
    Uso de los bits de datos.

    Attributes:
        column_counts: Puntos por columna (bit * N + símbolo)
        zero_rows: Filas sin ningún punto
        symbol_nodes: Nodos del árbol que llevan cada símbolo
    """

    column_counts: np.ndarray
    zero_rows: Tuple[int, ...]
    symbol_nodes: np.ndarray

    def symbol_columns(self, symbol: int, n_symbols: int) -> np.ndarray:
        return self.column_counts[symbol::n_symbols]

    def unused_columns(self) -> List[int]:
        return [int(c) for c in np.flatnonzero(self.column_counts == 0)]


def utilization_report(sys: Gf2System) -> UtilizationReport:
    dense = sys.dense()
    counts = dense.sum(axis=0).astype(np.int64)
    zero_rows = tuple(int(r) for r in np.flatnonzero(dense.sum(axis=1) == 0))
    # la columna de bit 0 de un símbolo tiene un punto por nodo que lo lleva
    symbol_nodes = counts[: sys.grammar.n_symbols].copy() if sys.depth else np.zeros(sys.grammar.n_symbols, np.int64)
    return UtilizationReport(counts, zero_rows, symbol_nodes)


@log_function_call
def solve_for_tree(g: Grammar, target: ExplicitTree, m: int = 32) -> ScrambleData:
    """
    Resuelve los datos que reproducen exactamente el árbol objetivo.

    Las filas se insertan en orden (nivel, prefijo); la primera fila que
    vuelve inconsistente el sistema es la que se reporta.

    Raises:
        InfeasibleTreeError: sistema sin solución (con nivel y prefijo de la fila)
        DepthGuardError: profundidad del objetivo > 16
    """
    depth = target.depth
    if depth > m:
        raise ValueError(f"Profundidad del objetivo {depth} mayor que m={m}")
    system = build_bit_map(g, depth)
    rhs = target.flat()

    basis: Dict[int, int] = {}
    for r in range(system.n_rows):
        row = (system.row_int(r) << 1) | int(rhs[r])
        while row > 1:
            pivot = row.bit_length() - 1
            if pivot not in basis:
                basis[pivot] = row
                break
            row ^= basis[pivot]
        if row == 1:
            level, prefix = row_position(r)
            logger.warning(f"Árbol inalcanzable: fila {r} inconsistente (nivel {level}, prefijo {prefix})")
            raise InfeasibleTreeError(r, level, prefix)

    # Sustitución hacia atrás: pivotes de menor a mayor, libres en cero
    solution = 0
    for pivot in sorted(basis):
        row = basis[pivot]
        col = pivot - 1
        rest = (row >> 1) ^ (1 << col)
        value = (row & 1) ^ (bin(rest & solution).count("1") & 1)
        if value:
            solution |= 1 << col

    n = g.n_symbols
    vectors = []
    for symbol in range(n):
        vector = 0
        for bit in range(depth):
            if (solution >> (bit * n + symbol)) & 1:
                vector |= 1 << (m - 1 - bit)
        vectors.append(vector)
    logger.info(f"Datos resueltos para un árbol de profundidad {depth} ({len(basis)} pivotes)")
    return ScrambleData(tuple(vectors), depth, m)


def try_solve_for_tree(g: Grammar, target: ExplicitTree, m: int = 32) -> Optional[ScrambleData]:
    try:
        return solve_for_tree(g, target, m)
    except InfeasibleTreeError:
        return None
