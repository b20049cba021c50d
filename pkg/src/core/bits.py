"""
Utilidades de bits compartidas: máscaras, inversión de bits, prefix-XOR y
mezcla de semillas de 64 bits.

Todas las palabras de m bits se interpretan con el bit más significativo
como nivel 0 (el primer bit binario de la fracción x / 2^m).
"""

from typing import Union

import numpy as np

MASK64 = (1 << 64) - 1
MAX_BITS = 32

WordLike = Union[int, np.ndarray]


def bit_mask(m: int) -> int:
    """Máscara con los m bits bajos encendidos."""
    return (1 << m) - 1


def top_mask(depth: int, m: int) -> int:
    """Máscara con los `depth` bits superiores de una palabra de m bits."""
    if depth <= 0:
        return 0
    return bit_mask(m) ^ bit_mask(m - depth)


def check_bit_depth(m: int) -> int:
    if not 1 <= m <= MAX_BITS:
        raise ValueError(f"Profundidad de bits fuera de rango (1..{MAX_BITS}): {m}")
    return m


def parity(value: int) -> int:
    """Paridad de un entero no negativo."""
    return bin(value).count("1") & 1


def _reverse64(values: np.ndarray) -> np.ndarray:
    # Intercambio por mitades, como reverse32 pero en 64 bits
    x = values.astype(np.uint64, copy=True)
    for shift, mask in (
        (1, 0x5555555555555555),
        (2, 0x3333333333333333),
        (4, 0x0F0F0F0F0F0F0F0F),
        (8, 0x00FF00FF00FF00FF),
        (16, 0x0000FFFF0000FFFF),
        (32, 0x00000000FFFFFFFF),
    ):
        s = np.uint64(shift)
        k = np.uint64(mask)
        x = ((x >> s) & k) | ((x & k) << s)
    return x


def reverse_bits(values: WordLike, m: int) -> WordLike:
    """
    Invierte el orden de los m bits bajos.

    Args:
        values: Entero o arreglo de enteros < 2^m
        m: Número de bits

    Returns:
        Mismo tipo que la entrada, con los bits invertidos dentro de m bits
    """
    if isinstance(values, (int, np.integer)):
        value = int(values)
        return int(format(value, f"0{m}b")[::-1], 2) if m > 0 else 0
    arr = np.asarray(values, dtype=np.uint64)
    return _reverse64(arr) >> np.uint64(64 - m)


def prefix_xor(vector: int, depth: int, m: int) -> int:
    """
    Prefix-XOR P(v) de un vector MSB-first, recortado a `depth` bits.

    El bit l de P(v) es el XOR de los bits 0..l de v. Es la inversa del
    código Gray: v = P ^ (P >> 1).
    """
    p = vector
    shift = 1
    while shift < m:
        p ^= p >> shift
        shift <<= 1
    return p & top_mask(depth, m)


def gray_code(value: int, m: int) -> int:
    """Inversa de prefix_xor sobre palabras de m bits."""
    return (value ^ (value >> 1)) & bit_mask(m)


def splitmix64(value: int) -> int:
    """Paso del generador SplitMix64 (mezclador de 64 bits)."""
    z = (value + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def mix_seed(seed: int, *streams: int) -> int:
    """
    Deriva una semilla de 64 bits a partir de la semilla maestra y una lista
    de índices de flujo (dimensión, realización, ...).

    mix_seed(s, a, b) = splitmix64(splitmix64(splitmix64(s) ^ a) ^ b)
    """
    h = splitmix64(seed & MASK64)
    for stream in streams:
        h = splitmix64(h ^ (stream & MASK64))
    return h


def make_rng(seed: int, *streams: int) -> np.random.Generator:
    """Generador numpy reproducible para (semilla, flujos...)."""
    return np.random.default_rng(mix_seed(seed, *streams))


def to_unit(words: np.ndarray, m: int) -> np.ndarray:
    """Convierte palabras de punto fijo de m bits a fracciones en [0, 1)."""
    return np.asarray(words, dtype=np.float64) / float(1 << m)
