"""
Scrambling ART-Owen: aplicación e inversión sobre palabras de punto fijo.

Cada símbolo de la gramática lleva un vector de bits que XOR-scramblea todo
su subárbol; el bit de volteo de un nodo es el XOR de las contribuciones de
sus ancestros. El descenso usa siempre el bit ORIGINAL (previo al volteo),
lo que hace que la inversión sea el mismo recorrido en espejo.

Dos caminos equivalentes:
  - escalar: el recorrido literal con acumulador, nivel a nivel;
  - vectorizado: tablas por dimensión (símbolo x byte -> contribución y
    siguiente símbolo) que avanzan ocho niveles por paso sobre arreglos numpy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from src.core.bits import bit_mask, check_bit_depth, make_rng, reverse_bits, top_mask
from src.core.exceptions import DepthGuardError, IndexOutOfRangeError
from src.core.logger import logger
from src.sampling.grammar import Grammar
from src.sampling.sobol import SamplePoint

WordLike = Union[int, np.ndarray]

MAX_TREE_DEPTH = 24
CHUNK_BITS = 8


# ---------- Tipos ----------

@dataclass(frozen=True)
class ScrambleData:
    """
    Vectores de aleatorización, uno por símbolo.

    Attributes:
        vectors: N palabras de m bits; el bit j (desde el MSB) actúa j niveles
            por debajo del nodo que lleva el símbolo
        depth: Profundidad de scrambling d (bits por debajo de d son cero)
        m: Profundidad de bits de la palabra
    """

    vectors: Tuple[int, ...]
    depth: int = 32
    m: int = 32

    def __post_init__(self) -> None:
        check_bit_depth(self.m)
        if not 0 <= self.depth <= self.m:
            raise ValueError(f"Profundidad {self.depth} fuera de 0..{self.m}")
        if not self.vectors:
            raise ValueError("Se necesita al menos un vector")
        allowed = top_mask(self.depth, self.m)
        vectors = tuple(int(v) for v in self.vectors)
        for k, v in enumerate(vectors):
            if v < 0 or v & ~allowed:
                raise ValueError(f"Vector {k} con bits fuera de la profundidad {self.depth}: {v:#x}")
        object.__setattr__(self, "vectors", vectors)

    @property
    def n_symbols(self) -> int:
        return len(self.vectors)

    @classmethod
    def zeros(cls, n_symbols: int, depth: int = 32, m: int = 32) -> "ScrambleData":
        return cls(tuple([0] * n_symbols), depth, m)

    @classmethod
    def random(cls, n_symbols: int, rng: np.random.Generator, depth: int = 32, m: int = 32) -> "ScrambleData":
        """Vectores uniformes de `depth` bits alineados al MSB."""
        raw = rng.integers(0, 1 << depth, size=n_symbols, dtype=np.uint64, endpoint=False)
        return cls(tuple(int(v) << (m - depth) for v in raw), depth, m)

    def with_vector(self, symbol: int, vector: int) -> "ScrambleData":
        vectors = list(self.vectors)
        vectors[symbol] = int(vector)
        return ScrambleData(tuple(vectors), self.depth, self.m)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.vectors, dtype=np.uint64)


@dataclass(frozen=True)
class ExplicitTree:
    """
    Árbol de scrambling de Owen materializado.

    levels[l] contiene 2^l bits de volteo indexados por el prefijo original
    de l bits.
    """

    levels: Tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        levels = []
        for level, bits in enumerate(self.levels):
            arr = np.asarray(bits, dtype=np.uint8).reshape(-1)
            if arr.size != (1 << level):
                raise ValueError(f"El nivel {level} debe tener {1 << level} bits, tiene {arr.size}")
            if arr.size and int(arr.max()) > 1:
                raise ValueError(f"El nivel {level} contiene valores distintos de 0/1")
            arr = arr.copy()
            arr.setflags(write=False)
            levels.append(arr)
        object.__setattr__(self, "levels", tuple(levels))

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def total_bits(self) -> int:
        return (1 << self.depth) - 1

    def flat(self) -> np.ndarray:
        """Todos los bits en orden de filas (nivel, prefijo)."""
        if not self.levels:
            return np.zeros(0, dtype=np.uint8)
        return np.concatenate(self.levels)

    @classmethod
    def from_flat(cls, bits: np.ndarray, depth: int) -> "ExplicitTree":
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(tuple(bits[(1 << l) - 1:(1 << (l + 1)) - 1] for l in range(depth)))

    @classmethod
    def zeros(cls, depth: int) -> "ExplicitTree":
        return cls(tuple(np.zeros(1 << l, dtype=np.uint8) for l in range(depth)))

    @classmethod
    def random(cls, depth: int, rng: np.random.Generator) -> "ExplicitTree":
        return cls(tuple(rng.integers(0, 2, size=1 << l, dtype=np.uint8) for l in range(depth)))

    @classmethod
    def from_string(cls, text: str) -> "ExplicitTree":
        """
        Árbol desde la notación por niveles separada por comas.

        Examples:
            ExplicitTree.from_string("1,01,1101,10010010")
        """
        parts = [p.strip() for p in text.split(",") if p.strip()]
        return cls(tuple(np.array([int(c) for c in part], dtype=np.uint8) for part in parts))

    def to_string(self) -> str:
        return ",".join("".join(str(int(b)) for b in level) for level in self.levels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExplicitTree):
            return NotImplemented
        return self.depth == other.depth and all(
            np.array_equal(a, b) for a, b in zip(self.levels, other.levels)
        )

    def __hash__(self) -> int:
        return hash(self.to_string())


@dataclass(frozen=True)
class _ChunkTables:
    offset: int
    width: int
    contribution: np.ndarray  # (N * 2^w,) XOR_i vec[sym_i] >> i
    next_symbol: np.ndarray   # (N * 2^w,)
    inverse: np.ndarray       # (N * 2^w,) byte original desde byte corregido


def _build_chunk_tables(grammar: Grammar, vectors: np.ndarray, offset: int, width: int, m: int) -> _ChunkTables:
    n = grammar.n_symbols
    span = 1 << width
    symbols = np.repeat(np.arange(n, dtype=np.intp)[:, None], span, axis=1)
    patterns = np.arange(span, dtype=np.int64)[None, :]
    contribution = np.zeros((n, span), dtype=np.uint64)
    for i in range(width):
        contribution ^= vectors[symbols] >> np.uint64(i)
        bits = (patterns >> (width - 1 - i)) & 1
        symbols = grammar.table[symbols, bits]

    # Volteos internos al bloque: bits superiores de la contribución
    inner = ((contribution >> np.uint64(m - width)) & np.uint64(span - 1)).astype(np.int64)
    corrected = np.broadcast_to(patterns, (n, span)) ^ inner
    inverse = np.empty((n, span), dtype=np.int64)
    inverse[np.arange(n)[:, None], corrected] = np.broadcast_to(patterns, (n, span))

    return _ChunkTables(
        offset=offset,
        width=width,
        contribution=contribution.reshape(-1),
        next_symbol=symbols.reshape(-1).astype(np.int64),
        inverse=inverse.reshape(-1),
    )


@dataclass(frozen=True)
class ArtOwenScrambler:
    """
    Scrambler ART-Owen: gramática compartida + datos por dimensión.

    Attributes:
        grammar: Gramática que reparte los datos sobre el árbol
        data: Una tabla ScrambleData por dimensión
        depth: Niveles scrambleados (los bits inferiores pasan intactos)
        m: Profundidad de bits de las coordenadas
    """

    grammar: Grammar
    data: Tuple[ScrambleData, ...]
    depth: Optional[int] = None
    m: int = 32
    _tables: Tuple[Tuple[_ChunkTables, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        check_bit_depth(self.m)
        data = tuple(self.data)
        if not data:
            raise ValueError("Se necesita al menos una dimensión de datos")
        depth = data[0].depth if self.depth is None else self.depth
        if not 0 <= depth <= self.m:
            raise ValueError(f"Profundidad {depth} fuera de 0..{self.m}")
        for dim, table in enumerate(data):
            if table.n_symbols != self.grammar.n_symbols:
                raise ValueError(
                    f"Dimensión {dim}: {table.n_symbols} vectores para una gramática de {self.grammar.n_symbols} símbolos"
                )
            if table.m != self.m:
                raise ValueError(f"Dimensión {dim}: m={table.m}, se esperaba {self.m}")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "depth", depth)

        tables = []
        for table in data:
            vectors = table.as_array()
            chunks = []
            for offset in range(0, depth, CHUNK_BITS):
                width = min(CHUNK_BITS, depth - offset)
                chunks.append(_build_chunk_tables(self.grammar, vectors, offset, width, self.m))
            tables.append(tuple(chunks))
        object.__setattr__(self, "_tables", tuple(tables))

    @classmethod
    def random(
        cls,
        grammar: Grammar,
        dims: int,
        seed: int,
        depth: int = 32,
        m: int = 32,
    ) -> "ArtOwenScrambler":
        """Datos nuevos por dimensión, sembrados con (seed, dimensión)."""
        data = tuple(
            ScrambleData.random(grammar.n_symbols, make_rng(seed, dim), depth, m) for dim in range(dims)
        )
        logger.debug(f"Scrambler aleatorio: {dims} dimensiones, {grammar.n_symbols} símbolos, profundidad {depth}")
        return cls(grammar, data, depth, m)

    @property
    def dims(self) -> int:
        return len(self.data)

    def with_data(self, dim: int, table: ScrambleData) -> "ArtOwenScrambler":
        data = list(self.data)
        data[dim] = table
        return ArtOwenScrambler(self.grammar, tuple(data), self.depth, self.m)

    # ---- Camino escalar (recorrido literal) ----

    def _walk(self, word: int, dim: int, inverse: bool) -> int:
        vectors = self.data[dim].vectors
        productions = self.grammar.productions
        mask = bit_mask(self.m)
        top = self.m - 1
        symbol = self.grammar.start
        acc = 0
        out = word
        for level in range(self.depth):
            position = top - level
            acc ^= vectors[symbol]
            flip = acc >> top
            bit = (word >> position) & 1
            if inverse:
                bit ^= flip
            out ^= flip << position
            acc = (acc << 1) & mask
            symbol = productions[symbol][bit]
        return out

    # ---- Camino vectorizado ----

    def _flips_forward(self, words: np.ndarray, dim: int) -> np.ndarray:
        symbols = np.full(words.shape, self.grammar.start, dtype=np.int64)
        flips = np.zeros(words.shape, dtype=np.uint64)
        for chunk in self._tables[dim]:
            shift = np.uint64(self.m - chunk.offset - chunk.width)
            pattern = ((words >> shift) & np.uint64((1 << chunk.width) - 1)).astype(np.int64)
            index = symbols * (1 << chunk.width) + pattern
            flips ^= chunk.contribution[index] >> np.uint64(chunk.offset)
            symbols = chunk.next_symbol[index]
        return flips & np.uint64(top_mask(self.depth, self.m))

    def _flips_inverse(self, words: np.ndarray, dim: int) -> np.ndarray:
        symbols = np.full(words.shape, self.grammar.start, dtype=np.int64)
        flips = np.zeros(words.shape, dtype=np.uint64)
        for chunk in self._tables[dim]:
            span = np.uint64((1 << chunk.width) - 1)
            shift = np.uint64(self.m - chunk.offset - chunk.width)
            corrected = ((words ^ flips) >> shift) & span
            index = symbols * (1 << chunk.width) + corrected.astype(np.int64)
            original = chunk.inverse[index]
            index = symbols * (1 << chunk.width) + original
            flips ^= chunk.contribution[index] >> np.uint64(chunk.offset)
            symbols = chunk.next_symbol[index]
        return flips & np.uint64(top_mask(self.depth, self.m))

    def _check_words(self, words: WordLike) -> None:
        limit = 1 << self.m
        if isinstance(words, (int, np.integer)):
            if not 0 <= int(words) < limit:
                raise IndexOutOfRangeError(f"Palabra fuera de {self.m} bits: {int(words)}")
        elif words.size and int(words.max()) >= limit:
            raise IndexOutOfRangeError(f"Palabras fuera de {self.m} bits")

    def scramble(self, words: WordLike, dim: int = 0) -> WordLike:
        """Scramblea un entero o un arreglo de palabras de la dimensión `dim`."""
        if isinstance(words, (int, np.integer)):
            self._check_words(words)
            return self._walk(int(words), dim, inverse=False)
        arr = np.asarray(words, dtype=np.uint64)
        self._check_words(arr)
        return arr ^ self._flips_forward(arr, dim)

    def unscramble(self, words: WordLike, dim: int = 0) -> WordLike:
        """Inversa exacta de scramble."""
        if isinstance(words, (int, np.integer)):
            self._check_words(words)
            return self._walk(int(words), dim, inverse=True)
        arr = np.asarray(words, dtype=np.uint64)
        self._check_words(arr)
        return arr ^ self._flips_inverse(arr, dim)

    def scramble_points(self, points: np.ndarray) -> np.ndarray:
        """Scramblea un arreglo (n, dims) de palabras, cada columna con su tabla."""
        points = np.asarray(points, dtype=np.uint64)
        if points.ndim != 2 or points.shape[1] > self.dims:
            raise ValueError(f"Se esperaba un arreglo (n, <= {self.dims}), llegó {points.shape}")
        out = np.empty_like(points)
        for dim in range(points.shape[1]):
            out[:, dim] = self.scramble(points[:, dim], dim)
        return out


# ---------- Operaciones ----------

def art_scramble(x: WordLike, dim: int, s: ArtOwenScrambler) -> WordLike:
    return s.scramble(x, dim)


def art_unscramble(y: WordLike, dim: int, s: ArtOwenScrambler) -> WordLike:
    return s.unscramble(y, dim)


def expand_to_tree(s: ArtOwenScrambler, dim: int = 0, depth: Optional[int] = None) -> ExplicitTree:
    """
    Materializa el árbol de Owen que implican la gramática y los datos.

    Raises:
        DepthGuardError: depth > 24 o mayor que la profundidad del scrambler
    """
    depth = s.depth if depth is None else depth
    if depth > MAX_TREE_DEPTH:
        raise DepthGuardError(f"Profundidad {depth} supera el límite de {MAX_TREE_DEPTH} niveles")
    if depth > s.depth:
        raise DepthGuardError(f"Profundidad {depth} mayor que la del scrambler ({s.depth})")

    vectors = s.data[dim].as_array()
    mask = np.uint64(bit_mask(s.m))
    top = np.uint64(s.m - 1)
    one = np.uint64(1)
    symbols = np.array([s.grammar.start], dtype=np.intp)
    acc = np.zeros(1, dtype=np.uint64)
    levels: List[np.ndarray] = []
    for _ in range(depth):
        acc = acc ^ vectors[symbols]
        levels.append(((acc >> top) & one).astype(np.uint8))
        acc = np.repeat((acc << one) & mask, 2)
        symbols = s.grammar.table[symbols].reshape(-1)
    return ExplicitTree(tuple(levels))


def tree_scramble(x: WordLike, t: ExplicitTree) -> WordLike:
    """
    Aplica un árbol explícito a valores de t.depth bits.

    Examples:
        tree_scramble(0b0000, ExplicitTree.from_string("1,01,1101,10010010")) == 0b1011
    """
    depth = t.depth
    if isinstance(x, (int, np.integer)):
        x = int(x)
        if not 0 <= x < (1 << depth):
            raise IndexOutOfRangeError(f"Valor fuera de {depth} bits: {x}")
        out = x
        for level, bits in enumerate(t.levels):
            out ^= int(bits[x >> (depth - level)]) << (depth - 1 - level)
        return out

    arr = np.asarray(x, dtype=np.uint64)
    if arr.size and int(arr.max()) >= (1 << depth):
        raise IndexOutOfRangeError(f"Valores fuera de {depth} bits")
    out = arr.copy()
    for level, bits in enumerate(t.levels):
        prefix = (arr >> np.uint64(depth - level)).astype(np.intp)
        out ^= bits[prefix].astype(np.uint64) << np.uint64(depth - 1 - level)
    return out


def xor_scramble(x: WordLike, code: int) -> WordLike:
    if isinstance(x, np.ndarray):
        return x ^ np.uint64(code)
    return int(x) ^ int(code)


_LK_CONSTANTS = (0x6C50B47C, 0xB82F1E52, 0xC7AFE638, 0x8D22F6E6)
_MASK32 = 0xFFFFFFFF


def _laine_karras(value: WordLike, seed: int) -> WordLike:
    if isinstance(value, np.ndarray):
        x = (value + np.uint64(seed & _MASK32)) & np.uint64(_MASK32)
        for c in _LK_CONSTANTS:
            x ^= (x * np.uint64(c)) & np.uint64(_MASK32)
        return x
    x = (value + seed) & _MASK32
    for c in _LK_CONSTANTS:
        x ^= (x * c) & _MASK32
    return x


def burley_hash_scramble(x: WordLike, seed: int, m: int = 32) -> WordLike:
    """
    Scrambling de Owen por hash (invertir bits, mezclar, invertir).

    Cada bit de salida depende solo de los bits más significativos que él,
    así que preserva las propiedades de red.
    """
    check_bit_depth(m)
    pad = 32 - m
    if isinstance(x, np.ndarray):
        words = np.asarray(x, dtype=np.uint64) << np.uint64(pad)
    else:
        words = int(x) << pad
    mixed = _laine_karras(reverse_bits(words, 32), seed)
    out = reverse_bits(mixed, 32)
    if isinstance(out, np.ndarray):
        return out >> np.uint64(pad)
    return out >> pad


def scramble_point(p: SamplePoint, s: ArtOwenScrambler) -> SamplePoint:
    if len(p.coords) > s.dims:
        raise ValueError(f"El punto tiene {len(p.coords)} dimensiones, el scrambler {s.dims}")
    return SamplePoint(tuple(s.scramble(c, d) for d, c in enumerate(p.coords)), p.m)


def explicit_owen_scramble(
    words: np.ndarray, tree: ExplicitTree, rng: np.random.Generator, m: int = 32
) -> np.ndarray:
    """
    Owen de referencia: el árbol explícito decide los bits superiores y los
    bits por debajo de su profundidad se sustituyen por bits aleatorios.
    """
    words = np.asarray(words, dtype=np.uint64)
    depth = tree.depth
    shift = np.uint64(m - depth)
    head = tree_scramble(words >> shift, tree)
    tail = rng.integers(0, 1 << (m - depth), size=words.shape, dtype=np.uint64, endpoint=False)
    return (head << shift) | tail
