"""
Configuración de una ejecución de la CLI (serializable con pydantic).
"""

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator

from config.settings import settings
from src.core.bits import MAX_BITS, make_rng
from src.sampling.grammar import Grammar, build_grammar

# Flujos de semilla reservados (las dimensiones usan 0, 1, 2, ...)
GRAMMAR_STREAM = 0x6772616D
TREE_STREAM = 0x74726565
OPTIMIZE_STREAM = 0x6F707469

DEFAULT_TM_WINDOW = 6  # 16 símbolos


class RunConfig(BaseModel):
    """
    Parámetros comunes de los comandos. Dos configuraciones iguales producen
    salidas idénticas bit a bit.
    """

    seed: int = Field(default_factory=lambda: settings.default_seed)
    grammar: Literal["tm", "ordered", "random", "single"] = "tm"
    symbols: Optional[int] = None
    window: Optional[int] = None
    unconstrained: bool = False
    depth: int = Field(default_factory=lambda: settings.scramble_depth)
    m: int = Field(default_factory=lambda: settings.bit_depth)
    dims: int = 2
    n: int = 256
    out: Optional[str] = None
    format: Optional[Literal["txt", "bin", "pgm", "csv"]] = None
    strict: bool = False
    workers: int = Field(default_factory=lambda: settings.workers)
    direction_numbers: Optional[str] = Field(default_factory=lambda: settings.direction_numbers_path)

    @field_validator("m")
    @classmethod
    def _check_m(cls, value: int) -> int:
        if not 1 <= value <= MAX_BITS:
            raise ValueError(f"m debe estar en 1..{MAX_BITS}")
        return value

    @field_validator("depth", "n", "dims", "workers")
    @classmethod
    def _non_negative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("debe ser >= 0")
        return value

    @property
    def effective_depth(self) -> int:
        return min(self.depth, self.m)

    def rng(self, *streams: int) -> np.random.Generator:
        return make_rng(self.seed, *streams)

    def build_grammar(self) -> Grammar:
        window = self.window
        if self.grammar == "tm" and window is None and self.symbols is None:
            window = DEFAULT_TM_WINDOW
        return build_grammar(
            self.grammar,
            rng=self.rng(GRAMMAR_STREAM),
            n_symbols=self.symbols,
            window=window,
            enforce_constraints=not self.unconstrained,
        )
