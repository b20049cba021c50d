"""
Zoneplates: imagen de un chirp radial integrado con un sampler global.

Las muestras de cada píxel se recuperan invirtiendo el scrambling y
resolviendo el sistema de índices (enumeración por píxel); no se filtra la
secuencia completa.
"""

from typing import Callable, Optional, Sequence

import numpy as np

from src.core.bits import to_unit
from src.core.logger import logger, log_function_call
from src.sampling.enumeration import PixelEnumerator
from src.sampling.scrambler import ArtOwenScrambler
from src.sampling.sobol import GeneratorMatrix, default_matrices, sobol_points

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


def zoneplate_constant(resolution: int) -> float:
    """c tal que el anillo de Nyquist de la imagen R x R cae en el radio 1."""
    return np.pi * resolution / 2.0


def zoneplate_integrand(resolution: int) -> Integrand:
    c = zoneplate_constant(resolution)

    def f(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return 0.5 * (1.0 + np.sin(c * (x * x + y * y)))

    return f


def constant_integrand(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.ones_like(x)


@log_function_call
def zoneplate(
    scrambler: Optional[ArtOwenScrambler],
    resolution: int,
    spp: int,
    matrices: Optional[Sequence[GeneratorMatrix]] = None,
    integrand: Optional[Integrand] = None,
) -> np.ndarray:
    """
    Imagen en escala de grises (R, R) indexada [py, px], valores en [0, 1].

    Args:
        scrambler: Scrambler ART-Owen (None = Sobol sin aleatorizar)
        resolution: R, potencia de dos
        spp: Muestras por píxel (el sampler global usa R*R*spp índices)
        matrices: Matrices de las dimensiones 0 y 1
        integrand: f(x, y) en coordenadas unidad; por defecto el chirp radial
    """
    if resolution < 1 or resolution & (resolution - 1):
        raise ValueError(f"La resolución debe ser potencia de dos: {resolution}")
    m = scrambler.m if scrambler is not None else 32
    matrices = tuple(matrices) if matrices is not None else default_matrices(2, m)
    integrand = integrand or zoneplate_integrand(resolution)
    k = resolution.bit_length() - 1
    count = resolution * resolution * spp

    words = sobol_points(count, matrices[:2])
    if scrambler is not None:
        words = scrambler.scramble_points(words)
    unit = to_unit(words, m)

    enumerator = PixelEnumerator(scrambler, matrices[:2], k, count)
    image = np.zeros((resolution, resolution), dtype=np.float64)
    for py in range(resolution):
        for px in range(resolution):
            indices = enumerator.enumerate((px, py)).astype(np.intp)
            if indices.size:
                values = integrand(unit[indices, 0], unit[indices, 1])
                image[py, px] = float(values.mean())
    logger.info(f"Zoneplate {resolution}x{resolution} con {spp} spp")
    return image


def zoneplate_reference(resolution: int, integrand: Optional[Integrand] = None, sub: int = 32) -> np.ndarray:
    """Referencia con una subrejilla estratificada sub x sub por píxel (centros)."""
    integrand = integrand or zoneplate_integrand(resolution)
    base = np.arange(resolution, dtype=np.float64)
    total = np.zeros((resolution, resolution), dtype=np.float64)
    for sy in range(sub):
        y = (base + (sy + 0.5) / sub) / resolution
        for sx in range(sub):
            x = (base + (sx + 0.5) / sub) / resolution
            total += integrand(x[None, :], y[:, None])
    return total / (sub * sub)


def radial_profile(image: np.ndarray) -> np.ndarray:
    """Media por anillo de radio entero en píxeles, centrado en la esquina (0, 0)."""
    rows, cols = image.shape
    radius = np.rint(np.hypot(*np.meshgrid(np.arange(cols), np.arange(rows)))).astype(np.int64)
    sums = np.bincount(radius.ravel(), weights=image.ravel())
    counts = np.bincount(radius.ravel())
    valid = counts > 0
    return sums[valid] / counts[valid]


def ring_artifact_energy(image: np.ndarray, reference: np.ndarray) -> float:
    """Varianza del perfil radial de la diferencia contra la referencia."""
    if image.shape != reference.shape:
        raise ValueError("La imagen y la referencia deben tener la misma forma")
    return float(np.var(radial_profile(image - reference)))
