"""
Experimentos de convergencia: MSE de la integración de una gaussiana suave
en [0, 1)^2 en función del número de muestras.
"""

from typing import Callable, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.special import erf

from config.settings import settings
from src.core.bits import mix_seed
from src.core.logger import logger, log_function_call

GAUSSIAN_CENTER = 0.5
GAUSSIAN_SIGMA = 0.25


def gaussian_integrand(points: np.ndarray) -> np.ndarray:
    """f(x, y) = exp(-((x - 1/2)^2 + (y - 1/2)^2) / (2 * 0.25^2))."""
    points = np.asarray(points, dtype=np.float64)
    d2 = ((points - GAUSSIAN_CENTER) ** 2).sum(axis=1)
    return np.exp(-d2 / (2.0 * GAUSSIAN_SIGMA ** 2))


def gaussian_reference() -> float:
    """Integral exacta sobre el cuadrado unidad (separable, vía erf)."""
    s = GAUSSIAN_SIGMA
    one_axis = s * np.sqrt(2.0 * np.pi) * erf(GAUSSIAN_CENTER / (s * np.sqrt(2.0)))
    return float(one_axis ** 2)


@log_function_call
def gaussian_convergence(
    factory: Callable[[int, int], np.ndarray],
    n_values: Sequence[int],
    trials: int,
    seed: Optional[int] = None,
    integrand: Callable[[np.ndarray], np.ndarray] = gaussian_integrand,
    reference: Optional[float] = None,
) -> pd.DataFrame:
    """
    MSE del estimador de n puntos, promediado sobre `trials` semillas.

    Returns:
        DataFrame con columnas n y mse
    """
    for n in n_values:
        if n < 1 or n & (n - 1):
            raise ValueError(f"n debe ser potencia de dos: {n}")
    seed = settings.default_seed if seed is None else seed
    exact = gaussian_reference() if reference is None else reference

    rows = []
    for n in n_values:
        errors = np.empty(trials, dtype=np.float64)
        for t in range(trials):
            estimate = integrand(factory(mix_seed(seed, t), n)).mean()
            errors[t] = (estimate - exact) ** 2
        rows.append({"n": int(n), "mse": float(errors.mean())})
        logger.debug(f"n={n}: MSE={rows[-1]['mse']:.3e}")
    return pd.DataFrame(rows)


def fit_loglog_slope(table: pd.DataFrame) -> float:
    """Pendiente por mínimos cuadrados de log2(MSE) frente a log2(n)."""
    x = np.log2(table["n"].to_numpy(dtype=np.float64))
    y = np.log2(np.maximum(table["mse"].to_numpy(dtype=np.float64), np.finfo(np.float64).tiny))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
