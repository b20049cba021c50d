"""
Verificación de la propiedad de (0, k, 2)-red en base 2.
"""

from collections import Counter
from typing import Optional

import numpy as np


def _strata(points: np.ndarray, bits: int, axis: int, m: Optional[int]) -> np.ndarray:
    column = points[:, axis]
    if m is not None:
        return (column.astype(np.uint64) >> np.uint64(m - bits)).astype(np.int64) if bits else np.zeros(column.shape, np.int64)
    return np.minimum(np.floor(column * (1 << bits)), (1 << bits) - 1).astype(np.int64)


def net_check(points: np.ndarray, k: int, m: Optional[int] = None) -> bool:
    """
    Comprueba que cada estratificación 2^a x 2^(k-a), a = 0..k, tenga
    exactamente un punto por celda.

    Args:
        points: Arreglo (2^k, 2) de fracciones, o de palabras enteras si se da `m`
        k: Exponente de la red
        m: Profundidad de bits cuando los puntos son enteros de punto fijo
    """
    points = np.asarray(points)
    if points.ndim != 2 or points.shape[1] < 2:
        raise ValueError(f"Se esperaba un arreglo (N, 2), llegó {points.shape}")
    n_cells = 1 << k
    if points.shape[0] != n_cells:
        return False
    for a in range(k + 1):
        ix = _strata(points, a, 0, m)
        iy = _strata(points, k - a, 1, m)
        counts = np.bincount(ix * (1 << (k - a)) + iy, minlength=n_cells)
        if counts.size != n_cells or not np.all(counts == 1):
            return False
    return True


def net_check_hashed(points: np.ndarray, k: int, m: Optional[int] = None) -> bool:
    """Segunda implementación independiente: tabla hash de celdas (a, ix, iy)."""
    cells: Counter = Counter()
    scale = float(1 << m) if m is not None else 1.0
    for x, y in np.asarray(points)[:, :2]:
        fx = float(x) / scale
        fy = float(y) / scale
        for a in range(k + 1):
            cells[(a, int(fx * (1 << a)), int(fy * (1 << (k - a))))] += 1
    if len(cells) != (k + 1) * (1 << k):
        return False
    return all(count == 1 for count in cells.values())


def net_t_value(points: np.ndarray, k: int, m: Optional[int] = None) -> Optional[int]:
    """Menor t tal que los puntos forman una (t, k, 2)-red, o None si ninguno."""
    points = np.asarray(points)
    if points.shape[0] != (1 << k):
        return None
    for t in range(k + 1):
        ok = True
        cells = 1 << (k - t)
        for a in range(k - t + 1):
            ix = _strata(points, a, 0, m)
            iy = _strata(points, k - t - a, 1, m)
            counts = np.bincount(ix * (1 << (k - t - a)) + iy, minlength=cells)
            if not np.all(counts == (1 << t)):
                ok = False
                break
        if ok:
            return t
    return None
