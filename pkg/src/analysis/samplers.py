"""
Fábricas de muestreadores 2D para los experimentos de espectro y convergencia.

Cada fábrica es un callable (semilla, n) -> arreglo (n, 2) de fracciones en
[0, 1); la semilla identifica una realización.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from src.core.bits import make_rng, mix_seed, to_unit
from src.sampling.grammar import Grammar, build_tm_grammar
from src.sampling.scrambler import (
    ArtOwenScrambler,
    ExplicitTree,
    burley_hash_scramble,
    explicit_owen_scramble,
    xor_scramble,
)
from src.sampling.sobol import default_matrices, sobol_points

OWEN_ORACLE_DEPTH = 16


def _sobol_words(n: int, m: int) -> np.ndarray:
    return sobol_points(n, default_matrices(2, m))


@dataclass(frozen=True)
class UniformSampler:
    def __call__(self, seed: int, n: int) -> np.ndarray:
        return make_rng(seed).random((n, 2))


@dataclass(frozen=True)
class SobolSampler:
    """Sobol sin aleatorizar (ignora la semilla)."""

    m: int = 32

    def __call__(self, seed: int, n: int) -> np.ndarray:
        return to_unit(_sobol_words(n, self.m), self.m)


@dataclass(frozen=True)
class XorSampler:
    m: int = 32

    def __call__(self, seed: int, n: int) -> np.ndarray:
        words = _sobol_words(n, self.m)
        out = np.empty_like(words)
        for dim in range(2):
            code = int(make_rng(seed, dim).integers(0, 1 << self.m, dtype=np.uint64))
            out[:, dim] = xor_scramble(words[:, dim], code)
        return to_unit(out, self.m)


@dataclass(frozen=True)
class BurleySampler:
    m: int = 32

    def __call__(self, seed: int, n: int) -> np.ndarray:
        words = _sobol_words(n, self.m)
        out = np.empty_like(words)
        for dim in range(2):
            out[:, dim] = burley_hash_scramble(words[:, dim], mix_seed(seed, dim) & 0xFFFFFFFF, self.m)
        return to_unit(out, self.m)


@dataclass(frozen=True)
class ArtOwenSampler:
    """ART-Owen con datos nuevos por realización y gramática fija."""

    grammar: Grammar
    depth: int = 32
    m: int = 32

    def __call__(self, seed: int, n: int) -> np.ndarray:
        scrambler = ArtOwenScrambler.random(self.grammar, 2, seed, self.depth, self.m)
        return to_unit(scrambler.scramble_points(_sobol_words(n, self.m)), self.m)


@dataclass(frozen=True)
class OwenOracleSampler:
    """Owen de referencia: árbol explícito totalmente aleatorio + bits aleatorios debajo."""

    depth: int = OWEN_ORACLE_DEPTH
    m: int = 32

    def __call__(self, seed: int, n: int) -> np.ndarray:
        words = _sobol_words(n, self.m)
        out = np.empty_like(words)
        for dim in range(2):
            rng = make_rng(seed, dim)
            tree = ExplicitTree.random(self.depth, rng)
            out[:, dim] = explicit_owen_scramble(words[:, dim], tree, rng, self.m)
        return to_unit(out, self.m)


SAMPLER_NAMES = ("uniform", "sobol", "xor", "burley", "art", "owen")


def make_sampler(name: str, grammar: Optional[Grammar] = None, depth: int = 32, m: int = 32) -> Callable[[int, int], np.ndarray]:
    """Fábrica por nombre, usada por la CLI."""
    if name == "uniform":
        return UniformSampler()
    if name == "sobol":
        return SobolSampler(m)
    if name == "xor":
        return XorSampler(m)
    if name == "burley":
        return BurleySampler(m)
    if name == "art":
        return ArtOwenSampler(grammar or build_tm_grammar(6), depth, m)
    if name == "owen":
        return OwenOracleSampler(min(depth, m, OWEN_ORACLE_DEPTH), m)
    raise ValueError(f"Muestreador desconocido: {name} (opciones: {', '.join(SAMPLER_NAMES)})")
