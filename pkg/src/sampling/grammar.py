"""
Gramáticas libres de contexto que reparten los datos de aleatorización sobre
el árbol de scrambling.

Una gramática sobre el alfabeto {0..N-1} asigna a cada símbolo un par
(hijo izquierdo, hijo derecho). Se ofrecen tres construcciones: Thue-Morse
(por defecto), ordenada (reproduce cualquier árbol) y aleatoria.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from src.core.exceptions import GrammarConstructionError, GrammarError
from src.core.logger import logger, log_function_call

Production = Tuple[int, int]


@dataclass(frozen=True)
class Grammar:
    """
    Gramática binaria inmutable.

    Attributes:
        productions: Tabla de N pares (izquierdo, derecho)
        start: Símbolo inicial (raíz del árbol)
    """

    productions: Tuple[Production, ...]
    start: int = 0
    _table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        rules = tuple((int(a), int(b)) for a, b in self.productions)
        n = len(rules)
        if n < 1:
            raise GrammarError("La gramática necesita al menos un símbolo")
        for symbol, (left, right) in enumerate(rules):
            if not (0 <= left < n and 0 <= right < n):
                raise GrammarError(f"Producción fuera de rango para el símbolo {symbol}: ({left}, {right})")
        if not 0 <= self.start < n:
            raise GrammarError(f"Símbolo inicial fuera de rango: {self.start}")
        object.__setattr__(self, "productions", rules)
        table = np.asarray(rules, dtype=np.intp).reshape(n, 2)
        table.setflags(write=False)
        object.__setattr__(self, "_table", table)

    @property
    def n_symbols(self) -> int:
        return len(self.productions)

    @property
    def table(self) -> np.ndarray:
        """Tabla (N, 2) de solo lectura: table[s, b] = hijo b de s."""
        return self._table

    def child(self, symbol: int, bit: int) -> int:
        return self.productions[symbol][bit]

    def symbols_at_level(self, level: int) -> np.ndarray:
        """Símbolos de los 2^level nodos de un nivel, ordenados por prefijo original."""
        symbols = np.array([self.start], dtype=np.intp)
        for _ in range(level):
            symbols = self._table[symbols].reshape(-1)
        return symbols


@dataclass(frozen=True)
class GrammarReport:
    """
    Diagnóstico de una gramática.

    Attributes:
        twin_rules: Símbolos con producción (a, a)
        unreachable: Símbolos no alcanzables desde el inicial
        unproduced: Símbolos que no aparecen en ningún lado derecho
        fragmented: El conjunto alcanzable es un subconjunto propio del alfabeto
    """

    twin_rules: Tuple[int, ...]
    unreachable: Tuple[int, ...]
    unproduced: Tuple[int, ...]
    fragmented: bool

    @property
    def clean(self) -> bool:
        return not (self.twin_rules or self.unreachable or self.unproduced)

    def warnings(self) -> List[str]:
        out = []
        if self.twin_rules:
            out.append(f"reglas gemelas: {list(self.twin_rules)}")
        if self.unreachable:
            out.append(f"símbolos inalcanzables: {list(self.unreachable)}")
        if self.unproduced:
            out.append(f"símbolos nunca producidos: {list(self.unproduced)}")
        return out


def validate_grammar(g: Grammar) -> GrammarReport:
    """Calcula el informe exacto (alcanzabilidad por BFS desde el inicial)."""
    twins = tuple(s for s, (a, b) in enumerate(g.productions) if a == b)

    reached = {g.start}
    queue = deque([g.start])
    while queue:
        symbol = queue.popleft()
        for child in g.productions[symbol]:
            if child not in reached:
                reached.add(child)
                queue.append(child)
    unreachable = tuple(s for s in range(g.n_symbols) if s not in reached)

    produced = {c for pair in g.productions for c in pair}
    unproduced = tuple(s for s in range(g.n_symbols) if s not in produced)

    return GrammarReport(
        twin_rules=twins,
        unreachable=unreachable,
        unproduced=unproduced,
        fragmented=bool(unreachable),
    )


# ---- Thue-Morse ----

_TM_FLIP = str.maketrans("01", "10")


def thue_morse_word(length: int) -> str:
    """
    Prefijo de longitud `length` del punto fijo de 0->01, 1->10.

    Examples:
        thue_morse_word(8) == "01101001"
    """
    if length < 1:
        raise ValueError("La longitud debe ser >= 1")
    word = "0"
    while len(word) < length:
        word = word + word.translate(_TM_FLIP)
    return word[:length]


def _tm_morphism(word: str) -> str:
    return "".join("01" if c == "0" else "10" for c in word)


def _distinct_factors(word: str, length: int) -> List[str]:
    seen: Dict[str, None] = {}
    for i in range(len(word) - length + 1):
        seen.setdefault(word[i:i + length], None)
    return list(seen)


def tm_factors(window_length: int) -> List[str]:
    """
    Factores distintos de longitud L de la palabra de Thue-Morse, en orden de
    primera aparición. El índice en la lista es el símbolo.
    """
    if window_length < 1:
        raise ValueError("La ventana debe ser >= 1")
    size = max(1 << 12, 64 * window_length)
    factors = _distinct_factors(thue_morse_word(size), window_length)
    while True:
        size *= 2
        wider = _distinct_factors(thue_morse_word(size), window_length)
        if len(wider) == len(factors):
            return factors
        factors = wider


def tm_subword_complexity(n: int) -> int:
    """Número de factores distintos de longitud n de Thue-Morse (fórmula cerrada)."""
    if n < 1:
        raise ValueError("n debe ser >= 1")
    if n <= 2:
        return 2 * n
    if n == 3:
        return 6
    # n = 2^r + q + 1 con 0 < q <= 2^r
    r = (n - 2).bit_length() - 1
    q = n - (1 << r) - 1
    half = 1 << (r - 1)
    if q <= half:
        return 6 * half + 4 * q
    return 8 * half + 2 * q


def tm_window_for_symbols(n_symbols: int, max_window: int = 64) -> int:
    """Ventana L tal que la gramática TM tenga exactamente `n_symbols` símbolos."""
    for window in range(1, max_window + 1):
        count = tm_subword_complexity(window)
        if count == n_symbols:
            return window
        if count > n_symbols:
            break
    raise GrammarError(f"Ninguna ventana Thue-Morse produce {n_symbols} símbolos")


@lru_cache(maxsize=64)
@log_function_call
def build_tm_grammar(window_length: int) -> Grammar:
    """
    Gramática Thue-Morse extendida con ventana L.

    Los símbolos son los factores de longitud L; la producción del factor w
    son las ventanas [0, L) y [1, L+1) de mu(w). El inicial es el factor en
    la posición 0.
    """
    factors = tm_factors(window_length)
    index = {w: i for i, w in enumerate(factors)}
    productions = []
    for w in factors:
        image = _tm_morphism(w)
        productions.append((index[image[:window_length]], index[image[1:window_length + 1]]))
    grammar = Grammar(tuple(productions), start=0)
    logger.info(f"Gramática Thue-Morse construida: ventana {window_length}, {grammar.n_symbols} símbolos")
    return grammar


# ---- Ordenada ----

@log_function_call
def build_ordered_grammar(
    n_symbols: int,
    rng: np.random.Generator,
    enforce_constraints: bool = True,
    attempts: Optional[int] = None,
) -> Grammar:
    """
    Gramática ordenada: los símbolos llenan la cima del árbol en anchura
    (hijos de k = 2k+1, 2k+2 mientras sean < N) y las entradas restantes se
    eligen al azar.

    Con `enforce_constraints` las entradas libres no crean reglas gemelas y
    cubren todo símbolo aún no producido (cuando N >= 2).
    """
    if n_symbols < 1:
        raise ValueError("N debe ser >= 1")
    if n_symbols == 1:
        logger.warning("Gramática ordenada de un símbolo: la regla gemela (0, 0) es inevitable")
        return Grammar(((0, 0),), start=0)

    forced: List[List[Optional[int]]] = []
    free_slots: List[Tuple[int, int]] = []
    for k in range(n_symbols):
        pair: List[Optional[int]] = []
        for side, child in enumerate((2 * k + 1, 2 * k + 2)):
            if child < n_symbols:
                pair.append(child)
            else:
                pair.append(None)
                free_slots.append((k, side))
        forced.append(pair)

    produced = {c for pair in forced for c in pair if c is not None}
    missing = [s for s in range(n_symbols) if s not in produced]
    budget = attempts or settings.grammar_attempts

    for _ in range(budget):
        table = [list(pair) for pair in forced]
        if enforce_constraints:
            order = rng.permutation(len(free_slots))
            pending = list(rng.permutation(missing)) if missing else []
            for slot_pos in order:
                symbol, side = free_slots[int(slot_pos)]
                sibling = table[symbol][1 - side]
                if pending and pending[0] != sibling:
                    table[symbol][side] = int(pending.pop(0))
                    continue
                choices = [c for c in range(n_symbols) if c != sibling]
                table[symbol][side] = int(choices[int(rng.integers(len(choices)))])
        else:
            for symbol, side in free_slots:
                table[symbol][side] = int(rng.integers(n_symbols))

        grammar = Grammar(tuple((int(a), int(b)) for a, b in table), start=0)
        if not enforce_constraints:
            return grammar
        report = validate_grammar(grammar)
        if not report.twin_rules and not report.unproduced:
            logger.info(f"Gramática ordenada construida: {n_symbols} símbolos")
            return grammar

    raise GrammarConstructionError(f"No se pudo completar la gramática ordenada de {n_symbols} símbolos")


# ---- Aleatoria ----

def _repair_random_table(table: np.ndarray, rng: np.random.Generator) -> None:
    """
    Corrige en sitio las reglas gemelas y coloca cada símbolo no producido en
    una entrada cuyo valor aparece más de una vez.
    """
    n = table.shape[0]
    for symbol in np.flatnonzero(table[:, 0] == table[:, 1]):
        other = int(rng.integers(n - 1))
        table[symbol, 1] = other + (other >= table[symbol, 0])

    counts = np.bincount(table.reshape(-1), minlength=n)
    flat = table.reshape(-1)
    for missing in rng.permutation(np.flatnonzero(counts == 0)):
        for _ in range(16 * n):
            slot = int(rng.integers(2 * n))
            owner, side = divmod(slot, 2)
            if owner == missing or counts[flat[slot]] < 2 or table[owner, 1 - side] == missing:
                continue
            counts[flat[slot]] -= 1
            flat[slot] = missing
            counts[missing] += 1
            break


@log_function_call
def build_random_grammar(
    n_symbols: int,
    rng: np.random.Generator,
    enforce_constraints: bool = True,
    attempts: Optional[int] = None,
) -> Grammar:
    """
    Gramática con entradas uniformes. Con `enforce_constraints` cada intento
    corrige las entradas gemelas o que dejan símbolos sin producir y se
    descarta si aún quedan símbolos inalcanzables.

    Raises:
        GrammarConstructionError: presupuesto de intentos agotado (con N=1 la
            regla gemela es inevitable)
    """
    if n_symbols < 1:
        raise ValueError("N debe ser >= 1")
    budget = attempts or settings.grammar_attempts
    for attempt in range(budget):
        table = rng.integers(0, n_symbols, size=(n_symbols, 2))
        if enforce_constraints and n_symbols > 1:
            _repair_random_table(table, rng)
        grammar = Grammar(tuple((int(a), int(b)) for a, b in table), start=0)
        if not enforce_constraints or validate_grammar(grammar).clean:
            logger.info(f"Gramática aleatoria construida: {n_symbols} símbolos ({attempt + 1} intentos)")
            return grammar
    raise GrammarConstructionError(
        f"Sin gramática aleatoria válida de {n_symbols} símbolos tras {budget} intentos"
    )


def single_symbol_grammar() -> Grammar:
    """Gramática de un símbolo: reproduce el XOR-scrambling."""
    return Grammar(((0, 0),), start=0)


def build_grammar(
    kind: str,
    rng: Optional[np.random.Generator] = None,
    n_symbols: Optional[int] = None,
    window: Optional[int] = None,
    enforce_constraints: bool = True,
) -> Grammar:
    """Fábrica común para la CLI y los experimentos."""
    if kind == "tm":
        if window is None:
            window = tm_window_for_symbols(n_symbols) if n_symbols else 1
        return build_tm_grammar(window)
    if kind == "single":
        return single_symbol_grammar()
    if rng is None:
        raise ValueError(f"La gramática '{kind}' necesita un generador aleatorio")
    if n_symbols is None:
        raise ValueError(f"La gramática '{kind}' necesita --symbols")
    if kind == "ordered":
        return build_ordered_grammar(n_symbols, rng, enforce_constraints)
    if kind == "random":
        return build_random_grammar(n_symbols, rng, enforce_constraints)
    raise ValueError(f"Tipo de gramática desconocido: {kind}")


def grammar_from_rules(rules: Sequence[Sequence[int]], start: int = 0) -> Grammar:
    return Grammar(tuple((int(a), int(b)) for a, b in rules), start=start)
