"""
Periodogramas de conjuntos de puntos 2D y su promedio radial.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np
import pandas as pd

from config.settings import settings
from src.core.bits import mix_seed
from src.core.logger import logger, log_function_call

# (semilla, n) -> arreglo (n, 2) de fracciones en [0, 1)
SamplerFactory = Callable[[int, int], np.ndarray]

REALIZATION_CHUNK = 16


@dataclass(frozen=True)
class SpectrumGrid:
    """
    Espectro de potencia en la rejilla entera [-R/2, R/2)^2.

    Attributes:
        resolution: R
        power: Arreglo (R, R); power[ix, iy] corresponde a (fx, fy) = (ix - R/2, iy - R/2)
        realizations: Número de periodogramas promediados
    """

    resolution: int
    power: np.ndarray
    realizations: int = 1

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(-self.resolution // 2, self.resolution // 2)

    @property
    def dc(self) -> float:
        center = self.resolution // 2
        return float(self.power[center, center])


def periodogram(points: np.ndarray, resolution: int) -> SpectrumGrid:
    """
    P(f) = |sum_j exp(-2 pi i f . x_j)|^2 / N sobre la rejilla de frecuencias enteras.

    La suma 2D se factoriza en un producto de matrices (R, N) x (N, R).
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2 or points.shape[0] == 0:
        raise ValueError(f"Se esperaba un arreglo (N, 2) no vacío, llegó {points.shape}")
    n = points.shape[0]
    freqs = np.arange(-resolution // 2, resolution // 2, dtype=np.float64)
    ex = np.exp(-2j * np.pi * np.outer(freqs, points[:, 0]))
    ey = np.exp(-2j * np.pi * np.outer(freqs, points[:, 1]))
    power = np.abs(ex @ ey.T) ** 2 / n
    return SpectrumGrid(resolution, power, 1)


def _chunk_sum(factory: SamplerFactory, seed: int, start: int, stop: int, n_points: int, resolution: int) -> np.ndarray:
    total = np.zeros((resolution, resolution), dtype=np.float64)
    for r in range(start, stop):
        total += periodogram(factory(mix_seed(seed, r), n_points), resolution).power
    return total


@log_function_call
def average_periodogram(
    factory: SamplerFactory,
    realizations: int,
    n_points: int,
    resolution: int,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
) -> SpectrumGrid:
    """
    Promedio de periodogramas de realizaciones independientes.

    La realización r usa la semilla mix_seed(seed, r); las sumas parciales se
    hacen por bloques fijos y se reducen en orden, así que el resultado no
    depende del número de workers.
    """
    if realizations < 1:
        raise ValueError("Se necesita al menos una realización")
    seed = settings.default_seed if seed is None else seed
    workers = workers or settings.workers
    bounds = [(s, min(s + REALIZATION_CHUNK, realizations)) for s in range(0, realizations, REALIZATION_CHUNK)]

    if workers <= 1:
        partials: List[np.ndarray] = [
            _chunk_sum(factory, seed, a, b, n_points, resolution) for a, b in bounds
        ]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(lambda ab: _chunk_sum(factory, seed, ab[0], ab[1], n_points, resolution), bounds))

    total = np.zeros((resolution, resolution), dtype=np.float64)
    for part in partials:
        total += part
    logger.info(f"Periodograma promedio: {realizations} realizaciones de {n_points} puntos, R={resolution}")
    return SpectrumGrid(resolution, total / realizations, realizations)


def radial_average(s: SpectrumGrid) -> pd.DataFrame:
    """
    Potencia media por banda de radio entero (round(|f|)), sin el DC y solo
    con bandas completas (radio < R/2).

    Returns:
        DataFrame con columnas radius, power y bins
    """
    freqs = s.frequencies
    radius = np.rint(np.hypot(freqs[:, None], freqs[None, :])).astype(np.int64)
    max_radius = s.resolution // 2 - 1
    keep = (radius >= 1) & (radius <= max_radius)
    sums = np.bincount(radius[keep], weights=s.power[keep], minlength=max_radius + 1)
    counts = np.bincount(radius[keep], minlength=max_radius + 1)
    bands = np.arange(1, max_radius + 1)
    return pd.DataFrame({
        "radius": bands,
        "power": sums[1:] / np.maximum(counts[1:], 1),
        "bins": counts[1:],
    })


def profile_distance(a: pd.DataFrame, b: pd.DataFrame) -> float:
    """Distancia L1 relativa entre dos perfiles radiales: sum|a - b| / sum|b|."""
    pa = a["power"].to_numpy()
    pb = b["power"].to_numpy()
    return float(np.abs(pa - pb).sum() / np.abs(pb).sum())


def spike_ratio(s: SpectrumGrid, reference: pd.DataFrame) -> float:
    """
    Mayor cociente entre un bin fuera del DC y la potencia del perfil de
    referencia a su mismo radio.
    """
    freqs = s.frequencies
    radius = np.rint(np.hypot(freqs[:, None], freqs[None, :])).astype(np.int64)
    lookup = dict(zip(reference["radius"].to_numpy(), reference["power"].to_numpy()))
    best = 0.0
    for r, level in lookup.items():
        if level <= 0:
            continue
        band = s.power[radius == r]
        if band.size:
            best = max(best, float(band.max() / level))
    return best
