"""
Escaneo exhaustivo de códigos de 32 bits para la gramática Thue-Morse de dos
símbolos a profundidad 8.

Un código empaqueta cuatro bytes, del más significativo al menos:
[eje 0 v0 | eje 0 v1 | eje 1 v0 | eje 1 v1]. Los 16 bits altos son los datos
del eje 0 y los 16 bajos los del eje 1.

Los primeros 256 puntos de Sobol 2D viven en la rejilla 256 x 256 y siguen
siendo una (0, 8, 2)-red tras el scrambling, así que cada columna x tiene un
único punto. El radio de conflicto se obtiene comparando columnas a distancia
1..18: ningún par más lejano puede bajar de la cota hexagonal.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from functools import lru_cache
from pathlib import Path
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config.settings import settings
from src.analysis.quality import hexagonal_bound
from src.analysis.spectrum import SpectrumGrid, periodogram
from src.core.logger import logger, log_function_call
from src.data.checkpoint import ScanCheckpoint, read_checkpoint, write_checkpoint
from src.optimize.objective import Objective, ObjectiveKind
from src.sampling.grammar import build_tm_grammar
from src.sampling.scrambler import ArtOwenScrambler, ScrambleData
from src.sampling.sobol import default_matrices, sobol_points

SCAN_DEPTH = 8
SCAN_POINTS = 256
GRID = 256
CODE_LIMIT = 1 << 32
PROGRESS_EVERY = 1 << 24
ENERGY_CUTOFF = -np.log(1e-16)
SUB_BATCH = 8192

RESULT_COLUMNS = ["code", "conflict_radius", "energy", "feasible"]


def empty_results() -> pd.DataFrame:
    return pd.DataFrame({
        "code": np.zeros(0, dtype=np.int64),
        "conflict_radius": np.zeros(0, dtype=np.float64),
        "energy": np.zeros(0, dtype=np.float64),
        "feasible": np.zeros(0, dtype=bool),
    })


# ---------- Tablas ----------

@lru_cache(maxsize=1)
def axis_table() -> np.ndarray:
    """
    T[c16, b]: byte scrambleado del byte de entrada b con los datos c16 = (v0 << 8) | v1.
    """
    grammar = build_tm_grammar(1)
    next_flat = grammar.table.reshape(-1).astype(np.uint8)
    codes = np.arange(1 << 16, dtype=np.uint32)
    v0 = (codes >> 8).astype(np.uint8)[:, None]
    v1 = (codes & 0xFF).astype(np.uint8)[:, None]
    inputs = np.arange(256, dtype=np.uint8)[None, :]

    symbol = np.full((1 << 16, 256), grammar.start, dtype=np.uint8)
    acc = np.zeros((1 << 16, 256), dtype=np.uint8)
    out = np.repeat(inputs, 1 << 16, axis=0)
    for level in range(SCAN_DEPTH):
        acc ^= np.where(symbol == 0, v0, v1)
        flip = acc >> np.uint8(7)
        out ^= flip << np.uint8(7 - level)
        bit = (inputs >> np.uint8(7 - level)) & np.uint8(1)
        acc = acc << np.uint8(1)
        symbol = next_flat[symbol * np.uint8(2) + bit]
    return out


@lru_cache(maxsize=1)
def sobol_bytes() -> Tuple[np.ndarray, np.ndarray]:
    """Byte superior de x e y de los primeros 256 puntos de Sobol 2D."""
    words = sobol_points(SCAN_POINTS, default_matrices(2, 32)) >> np.uint64(24)
    return words[:, 0].astype(np.intp), words[:, 1].astype(np.intp)


@lru_cache(maxsize=1)
def _y_table() -> np.ndarray:
    _, ys = sobol_bytes()
    return axis_table()[:, ys]


# ---------- Códigos ----------

def code_vectors(code: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    if not 0 <= code < CODE_LIMIT:
        raise ValueError(f"Código fuera de 32 bits: {code}")
    return ((code >> 24) & 0xFF, (code >> 16) & 0xFF), ((code >> 8) & 0xFF, code & 0xFF)


def code_to_scrambler(code: int, m: int = 32) -> ArtOwenScrambler:
    """Scrambler equivalente a un código de escaneo."""
    data = tuple(
        ScrambleData((v0 << (m - 8), v1 << (m - 8)), SCAN_DEPTH, m) for v0, v1 in code_vectors(code)
    )
    return ArtOwenScrambler(build_tm_grammar(1), data, SCAN_DEPTH, m)


def code_points(code: int) -> np.ndarray:
    """Los 256 puntos scrambleados del código, como fracciones."""
    table = axis_table()
    xs, ys = sobol_bytes()
    x = table[code >> 16, xs]
    y = table[code & 0xFFFF, ys]
    return np.stack([x, y], axis=1).astype(np.float64) / GRID


# ---------- Evaluación ----------

def _toroidal(dy: np.ndarray) -> np.ndarray:
    dy = np.abs(dy)
    return np.minimum(dy, GRID - dy)


def _min_d2(columns: np.ndarray) -> np.ndarray:
    max_offset = int(np.floor(hexagonal_bound(SCAN_POINTS) * GRID)) + 1
    best = np.full(columns.shape[0], np.iinfo(np.int32).max, dtype=np.int32)
    for o in range(1, max_offset + 1):
        dy = _toroidal(np.roll(columns, -o, axis=1) - columns).astype(np.int32)
        best = np.minimum(best, (o * o + dy * dy).min(axis=1))
    return best


def _energy(columns: np.ndarray, sigma: float) -> np.ndarray:
    # d^2 en unidades del espaciado medio: (dx^2 + dy^2) * N / GRID^2
    scale = SCAN_POINTS / float(GRID * GRID) / (2.0 * sigma * sigma)
    total = np.zeros(columns.shape[0], dtype=np.float64)
    for o in range(1, GRID // 2 + 1):
        if o * o * scale > ENERGY_CUTOFF:
            break
        dy = _toroidal(np.roll(columns, -o, axis=1) - columns).astype(np.float64)
        s = np.exp(-(o * o + dy * dy) * scale).sum(axis=1)
        total += s if o == GRID // 2 else 2.0 * s
    return total


def _evaluate_segment(args: Tuple[int, int, int, Objective, int]) -> pd.DataFrame:
    hi, lo_start, lo_end, objective, top_k = args
    xs, _ = sobol_bytes()
    x_bytes = axis_table()[hi, xs].astype(np.intp)
    column_of = np.empty(SCAN_POINTS, dtype=np.intp)
    column_of[x_bytes] = np.arange(SCAN_POINTS)

    frames = []
    for start in range(lo_start, lo_end, SUB_BATCH):
        stop = min(start + SUB_BATCH, lo_end)
        columns = _y_table()[start:stop][:, column_of].astype(np.int16)
        r_f = np.sqrt(_min_d2(columns)) / GRID / hexagonal_bound(SCAN_POINTS)
        energy = np.full(r_f.shape, np.nan)
        feasible = r_f >= objective.r_target
        if objective.kind == ObjectiveKind.ENERGY:
            energy = _energy(columns, objective.sigma)
        elif objective.kind == ObjectiveKind.COMBINED and feasible.any():
            energy[feasible] = _energy(columns[feasible], objective.sigma)
        frames.append(pd.DataFrame({
            "code": (np.int64(hi) << 16) + np.arange(start, stop, dtype=np.int64),
            "conflict_radius": r_f,
            "energy": energy,
            "feasible": feasible,
        }))
    return rank_results(pd.concat(frames, ignore_index=True), objective, top_k)


def rank_results(table: pd.DataFrame, objective: Objective, top_k: Optional[int] = None) -> pd.DataFrame:
    """Ordena por el objetivo (mejor primero); empates por código ascendente."""
    if table.empty:
        return table.reset_index(drop=True)
    r_f = table["conflict_radius"].to_numpy()
    energy = table["energy"].to_numpy()
    codes = table["code"].to_numpy()
    if objective.kind == ObjectiveKind.CONFLICT:
        tier = np.zeros(len(table))
        value = r_f
    elif objective.kind == ObjectiveKind.ENERGY:
        tier = np.zeros(len(table))
        value = -energy
    else:
        tier = table["feasible"].to_numpy().astype(np.float64)
        value = np.where(tier > 0, -energy, r_f)
    order = np.lexsort((codes, -value, -tier))
    if top_k is not None:
        order = order[:top_k]
    return table.iloc[order].reset_index(drop=True)


def _segments(start: int, end: int, chunk: int) -> Iterator[Tuple[int, int, int]]:
    code = start
    while code < end:
        hi = code >> 16
        stop = min(end, (hi + 1) << 16, code + chunk)
        yield hi, code & 0xFFFF, (stop - 1 & 0xFFFF) + 1
        code = stop


def evaluate_codes(codes: Sequence[int], objective: Objective) -> pd.DataFrame:
    """Evalúa una lista arbitraria de códigos (resultado en el orden de entrada)."""
    frames = []
    for code in codes:
        frames.append(_evaluate_segment((code >> 16, code & 0xFFFF, (code & 0xFFFF) + 1, objective, 1)))
    if not frames:
        return empty_results()
    return pd.concat(frames, ignore_index=True)


def _objective_meta(objective: Objective) -> dict:
    meta = asdict(objective)
    meta["kind"] = objective.kind.value
    return meta


@log_function_call
def exhaustive_scan(
    objective: Objective,
    code_range: Tuple[int, int] = (0, CODE_LIMIT),
    top_k: Optional[int] = None,
    workers: Optional[int] = None,
    checkpoint: Optional[Union[str, Path]] = None,
) -> pd.DataFrame:
    """
    Evalúa todos los códigos de [inicio, fin) y devuelve el top-K ordenado.

    El rango se parte en segmentos fijos (a lo sumo 2^SCAN_CHUNK_LOG2 códigos,
    sin cruzar los 16 bits altos); los resultados se fusionan en orden, así
    que el resultado no depende del número de workers. Con `checkpoint` el
    progreso se guarda tras cada lote y se reanuda si el archivo existe.
    """
    start, end = code_range
    if not 0 <= start < end <= CODE_LIMIT:
        raise ValueError(f"Rango inválido: [{start}, {end})")
    top_k = top_k or settings.scan_top_k
    workers = workers or settings.workers
    chunk = 1 << min(16, settings.scan_chunk_log2)
    meta = _objective_meta(objective)

    top = empty_results()
    next_code = start
    if checkpoint is not None and Path(checkpoint).exists():
        saved = read_checkpoint(checkpoint)
        if (saved.range_start, saved.range_end) == (start, end) and saved.objective == meta:
            top, next_code = saved.top, saved.next_code
            logger.info(f"Reanudando escaneo desde {next_code:#010x}")
        else:
            logger.warning(f"Checkpoint {checkpoint} de otro escaneo; se ignora")

    segments = list(_segments(next_code, end, chunk))
    batch = max(1, workers) * 4
    reported = (next_code - start) // PROGRESS_EVERY
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for b in range(0, len(segments), batch):
            jobs = [(hi, lo, hi_end, objective, top_k) for hi, lo, hi_end in segments[b:b + batch]]
            results: List[pd.DataFrame] = list(pool.map(_evaluate_segment, jobs)) if pool else [
                _evaluate_segment(job) for job in jobs
            ]
            top = rank_results(pd.concat(([top] if len(top) else []) + results, ignore_index=True), objective, top_k)
            hi, _, lo_end = segments[min(b + batch, len(segments)) - 1]
            next_code = (hi << 16) + lo_end

            done = next_code - start
            if done // PROGRESS_EVERY > reported:
                reported = done // PROGRESS_EVERY
                logger.info(f"Escaneo: {done} de {end - start} códigos evaluados")
            if checkpoint is not None:
                write_checkpoint(checkpoint, ScanCheckpoint(start, end, next_code, meta, top))
    finally:
        if pool is not None:
            pool.shutdown()

    logger.info(f"Escaneo completo [{start:#010x}, {end:#010x}): mejor r_f {top['conflict_radius'].max():.4f}")
    return top.astype({"code": np.int64, "conflict_radius": np.float64, "energy": np.float64, "feasible": bool})


def average_code_spectrum(codes: Sequence[int], resolution: int) -> SpectrumGrid:
    """Periodograma promedio de los conjuntos de los códigos dados."""
    if not len(codes):
        raise ValueError("Se necesita al menos un código")
    total = np.zeros((resolution, resolution), dtype=np.float64)
    for code in codes:
        total += periodogram(code_points(int(code)), resolution).power
    return SpectrumGrid(resolution, total / len(codes), len(codes))
