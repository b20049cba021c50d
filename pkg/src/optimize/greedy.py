"""
Descenso greedy sobre los datos de scrambling.

Cada intento reemplaza el vector completo de un símbolo en un eje y se
acepta solo si el objetivo mejora estrictamente; el proceso termina tras un
barrido completo sin cambios aceptados.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from src.analysis.quality import QualityScore
from src.core.bits import to_unit
from src.core.logger import logger, log_function_call
from src.optimize.objective import Objective
from src.sampling.grammar import Grammar
from src.sampling.scrambler import ArtOwenScrambler, ScrambleData
from src.sampling.sobol import default_matrices, sobol_points

MAX_OPTIMIZE_POINTS = 1 << 16


@dataclass(frozen=True)
class OptimizationResult:
    """
    Attributes:
        data: Tablas finales, una por eje
        score: Calidad del conjunto final
        history: Clave del objetivo tras cada cambio aceptado (empieza por la inicial)
        sweeps: Barridos ejecutados
    """

    data: Tuple[ScrambleData, ...]
    score: QualityScore
    history: List[Tuple[float, float]] = field(default_factory=list)
    sweeps: int = 0

    @property
    def accepted(self) -> int:
        return len(self.history) - 1


def _scramble_axis(grammar: Grammar, table: ScrambleData, words: np.ndarray) -> np.ndarray:
    return ArtOwenScrambler(grammar, (table,), table.depth, table.m).scramble(words, 0)


@log_function_call
def greedy_optimize(
    g: Grammar,
    initial: Sequence[ScrambleData],
    obj: Objective,
    attempts_per_symbol: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    n_points: int = 256,
    max_sweeps: Optional[int] = None,
) -> OptimizationResult:
    """
    Optimiza las tablas de los dos ejes sobre los primeros `n_points` puntos
    de Sobol 2D.

    Args:
        g: Gramática fija
        initial: Tablas iniciales (eje 0, eje 1)
        obj: Objetivo a mejorar
        attempts_per_symbol: Vectores candidatos por símbolo y eje
        rng: Generador para los candidatos
        n_points: Potencia de dos <= 2^16
        max_sweeps: Límite opcional de barridos

    Returns:
        OptimizationResult con objetivo >= el inicial
    """
    if n_points < 2 or n_points & (n_points - 1) or n_points > MAX_OPTIMIZE_POINTS:
        raise ValueError(f"n_points debe ser potencia de dos en 2..{MAX_OPTIMIZE_POINTS}: {n_points}")
    tables = list(initial)
    if len(tables) != 2:
        raise ValueError(f"Se esperaban 2 tablas (una por eje), llegaron {len(tables)}")
    attempts = settings.optimize_attempts if attempts_per_symbol is None else attempts_per_symbol
    rng = rng or np.random.default_rng(settings.default_seed)

    m = tables[0].m
    words = sobol_points(n_points, default_matrices(2, m))
    columns = [_scramble_axis(g, tables[axis], words[:, axis]) for axis in range(2)]

    def points_of(cols: Sequence[np.ndarray]) -> np.ndarray:
        return to_unit(np.stack(cols, axis=1), m)

    best = obj.evaluate(points_of(columns))
    history = [obj.key(best)]
    sweeps = 0

    while True:
        sweeps += 1
        changes = 0
        for axis in range(2):
            table = tables[axis]
            for symbol in range(g.n_symbols):
                for _ in range(attempts):
                    candidate = ScrambleData.random(1, rng, table.depth, m).vectors[0]
                    trial = table.with_vector(symbol, candidate)
                    trial_column = _scramble_axis(g, trial, words[:, axis])
                    trial_columns = list(columns)
                    trial_columns[axis] = trial_column
                    score = obj.evaluate(points_of(trial_columns))
                    if obj.better(score, best):
                        table, best = trial, score
                        columns[axis] = trial_column
                        history.append(obj.key(best))
                        changes += 1
            tables[axis] = table
        logger.info(f"Barrido {sweeps}: {changes} cambios aceptados, r_f={best.conflict_radius:.4f}")
        if changes == 0 or (max_sweeps is not None and sweeps >= max_sweeps):
            break

    return OptimizationResult(tuple(tables), best, history, sweeps)
