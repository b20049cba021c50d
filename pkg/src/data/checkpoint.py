"""
Checkpoints reanudables del escaneo exhaustivo (formato IPC de Apache Arrow).

El archivo guarda el top-K acumulado como tabla y el rango en los metadatos
del esquema: inicio, fin, siguiente código pendiente y objetivo.
"""

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd
import pyarrow as pa

from src.core.exceptions import FormatError
from src.core.logger import logger, log_function_call

_META_KEY = b"artowen.scan"


@dataclass(frozen=True)
class ScanCheckpoint:
    """
    Attributes:
        range_start: Primer código del rango
        range_end: Fin (exclusivo) del rango
        next_code: Primer código aún no evaluado
        objective: Descripción serializable del objetivo
        top: Mejores resultados hasta next_code
    """

    range_start: int
    range_end: int
    next_code: int
    objective: Dict[str, Any]
    top: pd.DataFrame

    @property
    def done(self) -> bool:
        return self.next_code >= self.range_end


@log_function_call
def write_checkpoint(path: Union[str, Path], checkpoint: ScanCheckpoint) -> None:
    path = Path(path)
    meta = {
        "range_start": checkpoint.range_start,
        "range_end": checkpoint.range_end,
        "next_code": checkpoint.next_code,
        "objective": checkpoint.objective,
    }
    table = pa.Table.from_pandas(checkpoint.top, preserve_index=False)
    table = table.replace_schema_metadata({_META_KEY: json.dumps(meta).encode("utf-8")})

    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        with pa.OSFile(str(tmp), "wb") as sink:
            with pa.ipc.new_file(sink, table.schema) as writer:
                writer.write_table(table)
        os.replace(tmp, path)
        logger.info(f"Checkpoint guardado: {path} (siguiente código {checkpoint.next_code:#010x})")
    except Exception as e:
        logger.error(f"Error guardando checkpoint {path}: {str(e)}")
        raise


def read_checkpoint(path: Union[str, Path]) -> ScanCheckpoint:
    """
    Raises:
        FormatError: archivo sin metadatos de escaneo
    """
    path = Path(path)
    with pa.OSFile(str(path), "rb") as source:
        table = pa.ipc.open_file(source).read_all()
    metadata = table.schema.metadata or {}
    if _META_KEY not in metadata:
        raise FormatError(f"{path} no es un checkpoint de escaneo")
    meta = json.loads(metadata[_META_KEY].decode("utf-8"))
    return ScanCheckpoint(
        range_start=int(meta["range_start"]),
        range_end=int(meta["range_end"]),
        next_code=int(meta["next_code"]),
        objective=dict(meta["objective"]),
        top=table.to_pandas(),
    )
