"""
Configuración principal de ArtOwen (Pydantic v2 + pydantic-settings).
"""

import os
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Cargar variables de entorno desde .env (si existe)
load_dotenv()

class Settings(BaseSettings):
    # Pydantic Settings v2: configuración del modelo/entorno
    model_config = SettingsConfigDict(
        env_file=".env",
        extra="ignore",         # ignora claves desconocidas en .env
        case_sensitive=False    # variables de entorno no sensibles a mayúsc/minúsc
    )

    # --- Muestreo ---
    default_seed: int = Field(20240521, alias="ARTOWEN_SEED")
    bit_depth: int = Field(32, alias="ARTOWEN_BIT_DEPTH")
    scramble_depth: int = Field(32, alias="ARTOWEN_SCRAMBLE_DEPTH")
    direction_numbers_path: Optional[str] = Field(None, alias="DIRECTION_NUMBERS_PATH")

    # --- Paralelismo ---
    workers: int = Field(1, alias="ARTOWEN_WORKERS")

    # --- Gramáticas ---
    grammar_attempts: int = Field(10000, alias="GRAMMAR_ATTEMPTS")

    # --- Optimización ---
    optimize_attempts: int = Field(1000, alias="OPTIMIZE_ATTEMPTS")
    scan_top_k: int = Field(1000, alias="SCAN_TOP_K")
    scan_chunk_log2: int = Field(16, alias="SCAN_CHUNK_LOG2")

    # --- Logging ---
    log_level: str = Field("INFO", alias="LOG_LEVEL")
    log_file: str = Field("./logs/artowen.log", alias="LOG_FILE")


# Instancia global de configuración
settings = Settings()

# Crear directorios necesarios
if settings.log_file:
    os.makedirs(os.path.dirname(settings.log_file) or ".", exist_ok=True)
