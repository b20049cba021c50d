"""
Formatos de archivo de ArtOwen.

- Gramática: línea 1 `N start`, luego N líneas `izquierdo derecho`.
- Datos de scrambling: por dimensión un bloque con línea `N depth` y N
  palabras hexadecimales alineadas al MSB.
- Puntos: texto `x y ...` por línea, o binario uint64 little-endian en punto
  fijo (palabra << (64 - m)).
- Imágenes: PGM (Pillow). Tablas: CSV con cabecera (pandas).
"""

import io
from pathlib import Path
from typing import IO, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from PIL import Image

from src.analysis.spectrum import SpectrumGrid
from src.core.exceptions import FormatError
from src.core.logger import logger
from src.sampling.grammar import Grammar
from src.sampling.scrambler import ScrambleData
from src.solver.gf2map import Gf2System, row_index

PathLike = Union[str, Path]
TextSource = Union[PathLike, IO[str]]


def _read_text(source: TextSource) -> List[str]:
    if hasattr(source, "read"):
        return source.read().splitlines()
    return Path(source).read_text(encoding="utf-8").splitlines()


def _write_text(target: Union[PathLike, IO[str]], text: str) -> None:
    if hasattr(target, "write"):
        target.write(text)
        return
    Path(target).write_text(text, encoding="utf-8")


def _ints(line: str, count: int, line_no: int) -> List[int]:
    fields = line.split()
    if len(fields) != count:
        raise FormatError(f"se esperaban {count} campos, hay {len(fields)}", line_no)
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise FormatError(f"campo no entero en {line.strip()!r}", line_no)


# ---------- Gramáticas ----------

def format_grammar(g: Grammar) -> str:
    lines = [f"{g.n_symbols} {g.start}"]
    lines += [f"{a} {b}" for a, b in g.productions]
    return "\n".join(lines) + "\n"


def write_grammar(g: Grammar, target: Union[PathLike, IO[str]]) -> None:
    _write_text(target, format_grammar(g))


def read_grammar(source: TextSource) -> Grammar:
    """
    Raises:
        FormatError: línea mal formada o número de reglas incorrecto
    """
    lines = [(i, l) for i, l in enumerate(_read_text(source), start=1) if l.strip()]
    if not lines:
        raise FormatError("archivo de gramática vacío", 1)
    n, start = _ints(lines[0][1], 2, lines[0][0])
    if len(lines) - 1 != n:
        raise FormatError(f"se esperaban {n} reglas, hay {len(lines) - 1}", lines[-1][0])
    rules = [tuple(_ints(text, 2, no)) for no, text in lines[1:]]
    try:
        return Grammar(tuple(rules), start=start)
    except ValueError as e:
        raise FormatError(str(e), lines[0][0])


def parse_rules(text: str) -> Grammar:
    """Gramática desde la notación compacta `3,2;2,2;0,0;0,0` (inicial 0)."""
    rules = []
    for part in text.split(";"):
        left, right = part.split(",")
        rules.append((int(left), int(right)))
    return Grammar(tuple(rules), start=0)


# ---------- Datos de scrambling ----------

def format_scramble_data(tables: Sequence[ScrambleData]) -> str:
    lines = []
    for table in tables:
        width = (table.m + 3) // 4
        lines.append(f"{table.n_symbols} {table.depth}")
        lines += [f"{v:0{width}x}" for v in table.vectors]
    return "\n".join(lines) + "\n"


def write_scramble_data(tables: Sequence[ScrambleData], target: Union[PathLike, IO[str]]) -> None:
    _write_text(target, format_scramble_data(tables))


def read_scramble_data(source: TextSource, m: int = 32) -> Tuple[ScrambleData, ...]:
    lines = [(i, l.strip()) for i, l in enumerate(_read_text(source), start=1) if l.strip()]
    tables = []
    pos = 0
    while pos < len(lines):
        line_no, header = lines[pos]
        n, depth = _ints(header, 2, line_no)
        block = lines[pos + 1:pos + 1 + n]
        if len(block) != n:
            raise FormatError(f"bloque incompleto: se esperaban {n} palabras", line_no)
        vectors = []
        for no, word in block:
            try:
                vectors.append(int(word, 16))
            except ValueError:
                raise FormatError(f"palabra hexadecimal inválida {word!r}", no)
        try:
            tables.append(ScrambleData(tuple(vectors), depth, m))
        except ValueError as e:
            raise FormatError(str(e), line_no)
        pos += 1 + n
    if not tables:
        raise FormatError("archivo de datos vacío", 1)
    return tuple(tables)


# ---------- Puntos ----------

def format_points(points: np.ndarray) -> str:
    buffer = io.StringIO()
    np.savetxt(buffer, np.asarray(points, dtype=np.float64), fmt="%.17g")
    return buffer.getvalue()


def write_points(points: np.ndarray, target: Union[PathLike, IO[str]]) -> None:
    """Escribe puntos como texto, una fila `x y ...` por punto."""
    _write_text(target, format_points(np.asarray(points, dtype=np.float64)))


def write_points_bin(words: np.ndarray, m: int, target: Union[PathLike, IO[bytes]]) -> None:
    """
    Escribe palabras de m bits como fracciones en punto fijo de 64 bits
    (uint64 little-endian, palabra << (64 - m)), sin pérdida para cualquier m.

    Args:
        words: arreglo (n, dims) de enteros < 2^m
        m: bits por coordenada
        target: ruta o flujo binario
    """
    words = np.asarray(words, dtype=np.uint64)
    payload = (words << np.uint64(64 - m)).astype("<u8").tobytes()
    if hasattr(target, "write"):
        target.write(payload)
    else:
        Path(target).write_bytes(payload)


def read_points_words(source: PathLike, dims: int = 2) -> np.ndarray:
    """Fracciones en punto fijo de 64 bits tal como se escribieron."""
    data = np.frombuffer(Path(source).read_bytes(), dtype="<u8")
    if data.size % dims:
        raise FormatError(f"{data.size} valores no forman puntos de {dims} dimensiones")
    return data.astype(np.uint64).reshape(-1, dims)


def read_points_bin(source: PathLike, dims: int = 2) -> np.ndarray:
    """Puntos en [0, 1); exactos en float64 para m <= 53."""
    return read_points_words(source, dims).astype(np.float64) / 2.0**64


# ---------- Imágenes ----------

def to_gray(image: np.ndarray, lo: Optional[float] = None, hi: Optional[float] = None) -> np.ndarray:
    """Escala un arreglo real a uint8 (por defecto [0, 1] -> [0, 255])."""
    image = np.asarray(image, dtype=np.float64)
    lo = 0.0 if lo is None else lo
    hi = 1.0 if hi is None else hi
    span = hi - lo if hi > lo else 1.0
    return np.clip(np.rint((image - lo) / span * 255.0), 0, 255).astype(np.uint8)


def write_pgm(image: np.ndarray, path: PathLike) -> None:
    """Guarda una imagen en escala de grises como PGM binario."""
    gray = image if image.dtype == np.uint8 else to_gray(image)
    try:
        Image.fromarray(np.ascontiguousarray(gray)).save(str(path), format="PPM")
        logger.info(f"Imagen guardada: {path} ({gray.shape[1]}x{gray.shape[0]})")
    except Exception as e:
        logger.error(f"Error guardando imagen {path}: {str(e)}")
        raise


def read_pgm(path: PathLike) -> np.ndarray:
    with Image.open(str(path)) as img:
        return np.asarray(img.convert("L"))


def spectrum_image(s: SpectrumGrid) -> np.ndarray:
    """Espectro en escala logarítmica; el eje fx son las columnas."""
    power = np.log10(np.maximum(s.power, 1e-6)).T
    return to_gray(power, -1.0, 1.0)


def bitmap_image(system: Gf2System) -> np.ndarray:
    """
    Matriz de puntos del sistema GF(2): punto negro sobre fondo blanco, con
    una fila gris entre niveles del árbol.
    """
    dense = system.dense()
    blocks = []
    for level in range(system.depth):
        if level:
            blocks.append(np.full((1, dense.shape[1]), 128, dtype=np.uint8))
        rows = dense[row_index(level, 0):row_index(level + 1, 0)]
        blocks.append(np.where(rows == 1, 0, 255).astype(np.uint8))
    if not blocks:
        return np.full((1, max(1, dense.shape[1])), 255, dtype=np.uint8)
    return np.concatenate(blocks, axis=0)


# ---------- Tablas ----------

def write_csv(table: pd.DataFrame, target: Union[PathLike, IO[str]]) -> None:
    table.to_csv(target, index=False)
