"""
Métricas de separación de puntos en el toro unidad: radio de conflicto y
energía blue-noise.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree


@dataclass(frozen=True)
class QualityScore:
    """
    Attributes:
        conflict_radius: Distancia mínima toroidal normalizada por la cota hexagonal
        bn_energy: Energía gaussiana de pares a escala sigma
    """

    conflict_radius: float
    bn_energy: float


def hexagonal_bound(n_points: int) -> float:
    """Cota de empaquetamiento hexagonal r_max = sqrt(2 / (sqrt(3) N))."""
    return float(np.sqrt(2.0 / (np.sqrt(3.0) * n_points)))


def _on_torus(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError(f"Se esperaba un arreglo (N, D), llegó {points.shape}")
    wrapped = np.mod(points, 1.0)
    wrapped[wrapped >= 1.0] = 0.0
    return wrapped


def min_toroidal_distance(points: np.ndarray) -> float:
    points = _on_torus(points)
    if points.shape[0] < 2:
        raise ValueError("Se necesitan al menos 2 puntos")
    tree = cKDTree(points, boxsize=1.0)
    distances, _ = tree.query(points, k=2)
    return float(distances[:, 1].min())


def conflict_radius(points: np.ndarray) -> float:
    """
    r_f = distancia mínima toroidal / r_max.

    Raises:
        ValueError: menos de 2 puntos
    """
    n = np.asarray(points).shape[0]
    return min_toroidal_distance(points) / hexagonal_bound(n)


def blue_noise_energy(points: np.ndarray, sigma: float = 0.5) -> float:
    """
    E = sum_{i != j} exp(-d_ij^2 / (2 sigma^2)), con d la distancia toroidal
    escalada por sqrt(N) (sigma en unidades del espaciado medio).
    """
    if sigma <= 0:
        raise ValueError("sigma debe ser > 0")
    points = _on_torus(points)
    n = points.shape[0]
    if n < 2:
        return 0.0
    diff = points[:, None, :] - points[None, :, :]
    diff -= np.rint(diff)
    d2 = (diff ** 2).sum(axis=-1) * n
    kernel = np.exp(-d2 / (2.0 * sigma * sigma))
    return float(kernel.sum() - n)


def quality_score(points: np.ndarray, sigma: float = 0.5) -> QualityScore:
    return QualityScore(conflict_radius(points), blue_noise_energy(points, sigma))
