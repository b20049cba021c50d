"""
ArtOwen - Línea de comandos

Scrambling de Owen dirigido por gramáticas sobre secuencias de Sobol:
generación de puntos, gramáticas, espectros, zoneplates, convergencia,
optimización de datos de scrambling y enumeración por píxel.
"""

import argparse
import logging
import sys
from typing import Dict, List, Optional

from pydantic import ValidationError

from src.core.exceptions import (
    ArtOwenError,
    GrammarConstructionError,
    InfeasibleTreeError,
    VerificationError,
)
from src.core.logger import logger
from src.optimize.objective import ObjectiveKind
from src.ui.commands import (
    EXIT_FAILED,
    EXIT_USAGE,
    Command,
    cmd_converge,
    cmd_enumerate,
    cmd_grammar,
    cmd_optimize,
    cmd_points,
    cmd_scan,
    cmd_spectrum,
    cmd_zoneplate,
)
from src.ui.config import RunConfig

COMMANDS: Dict[str, Command] = {
    "points": cmd_points,
    "grammar": cmd_grammar,
    "spectrum": cmd_spectrum,
    "zoneplate": cmd_zoneplate,
    "converge": cmd_converge,
    "optimize": cmd_optimize,
    "scan": cmd_scan,
    "enumerate": cmd_enumerate,
}

# Opciones que van a RunConfig; None significa "usar el valor por defecto"
CONFIG_FIELDS = (
    "seed", "grammar", "symbols", "window", "unconstrained", "depth", "m",
    "dims", "n", "out", "format", "strict", "workers", "direction_numbers",
)

SCRAMBLES = ("none", "art", "xor", "burley", "owen")


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Semilla maestra")
    common.add_argument("--grammar", choices=["tm", "ordered", "random", "single"], help="Tipo de gramática")
    common.add_argument("--symbols", type=int, help="Tamaño del alfabeto N")
    common.add_argument("--window", type=int, help="Ventana L de Thue-Morse")
    common.add_argument("--unconstrained", action="store_true", default=None,
                        help="No imponer restricciones al construir la gramática")
    common.add_argument("--depth", type=int, help="Profundidad de scrambling d")
    common.add_argument("--m", type=int, help="Bits por coordenada")
    common.add_argument("--dims", type=int, help="Dimensiones")
    common.add_argument("--n", type=int, help="Número de puntos")
    common.add_argument("--out", help="Archivo de salida (stdout si se omite)")
    common.add_argument("--format", choices=["txt", "bin", "pgm", "csv"], help="Formato de salida")
    common.add_argument("--strict", action="store_true", default=None, help="Fallar (exit 1) si una comprobación no se cumple")
    common.add_argument("--workers", type=int, help="Procesos/hilos de trabajo")
    common.add_argument("--direction-numbers", dest="direction_numbers", help="Archivo Joe-Kuo de números de dirección")
    common.add_argument("--log-level", dest="log_level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Nivel de logging")
    return common


def _objective_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--objective", choices=[k.value for k in ObjectiveKind], default=ObjectiveKind.COMBINED.value)
    parser.add_argument("--r-target", dest="r_target", type=float, default=0.2)
    parser.add_argument("--sigma", type=float, default=0.5)


def build_parser() -> argparse.ArgumentParser:
    """Parser con un subcomando por capacidad."""
    common = _common_options()
    parser = argparse.ArgumentParser(prog="artowen", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("points", parents=[common], help="Genera puntos de Sobol aleatorizados")
    p.add_argument("--scramble", choices=SCRAMBLES, default="art")

    p = sub.add_parser("grammar", parents=[common], help="Construye, valida o resuelve gramáticas")
    p.add_argument("action", choices=["build", "validate", "solve", "bitmap"])
    p.add_argument("source", nargs="?",
                   help="build: tipo de gramática; resto: archivo de gramática ('-' para stdin)")
    p.add_argument("--rules", help="Gramática en notación compacta, p. ej. 3,2;2,2;0,0;0,0")
    p.add_argument("--tree", help="Árbol objetivo como bits por nivel, p. ej. 1,10,1001")
    p.add_argument("--tree-depth", dest="tree_depth", type=int, default=4)

    p = sub.add_parser("spectrum", parents=[common], help="Periodograma promedio")
    p.add_argument("--sampler", choices=["uniform", "sobol", "xor", "burley", "art", "owen"], default="art")
    p.add_argument("--realizations", type=int, default=64)
    p.add_argument("--resolution", type=int, default=64)

    p = sub.add_parser("zoneplate", parents=[common], help="Render de zoneplate")
    p.add_argument("--scramble", choices=["none", "art"], default="art")
    p.add_argument("--resolution", type=int, default=256)
    p.add_argument("--spp", type=int, default=4)
    p.add_argument("--metric", action="store_true", help="Imprime la energía de artefactos de anillo")

    p = sub.add_parser("converge", parents=[common], help="Error cuadrático medio frente a n")
    p.add_argument("--samplers", default="uniform,sobol,xor,art")
    p.add_argument("--min-log2", dest="min_log2", type=int, default=4)
    p.add_argument("--max-log2", dest="max_log2", type=int, default=12)
    p.add_argument("--trials", type=int, default=64)

    p = sub.add_parser("optimize", parents=[common], help="Descenso voraz de los datos de scrambling")
    _objective_options(p)
    p.add_argument("--attempts", type=int, help="Intentos por símbolo y barrido")
    p.add_argument("--max-sweeps", dest="max_sweeps", type=int)

    p = sub.add_parser("scan", parents=[common], help="Escaneo exhaustivo de la gramática de 2 símbolos")
    _objective_options(p)
    p.add_argument("--start", default="0", help="Primer código (admite 0x...)")
    p.add_argument("--end", default="0x100000000", help="Código final exclusivo")
    p.add_argument("--top-k", dest="top_k", type=int)
    p.add_argument("--checkpoint", help="Archivo de checkpoint para reanudar")
    p.add_argument("--spectrum-out", dest="spectrum_out", help="PGM del espectro promedio del top-K")
    p.add_argument("--resolution", type=int, default=64)

    p = sub.add_parser("enumerate", parents=[common], help="Índices de las muestras dentro de un píxel")
    p.add_argument("--pixel", nargs=2, type=int, metavar=("PX", "PY"), required=True)
    p.add_argument("--grid-log2", dest="grid_log2", type=int, required=True)
    p.add_argument("--scramble", choices=["none", "art"], default="art")

    return parser


def _reads_piped_grammar(args: argparse.Namespace) -> bool:
    """Sin fuente, reglas ni flags de gramática, una tabla canalizada por stdin manda."""
    if args.rules or any(getattr(args, name, None) is not None for name in ("grammar", "symbols", "window")):
        return False
    return sys.stdin is not None and not sys.stdin.isatty()


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """RunConfig a partir de los flags; los omitidos toman los valores de settings."""
    values = {name: getattr(args, name) for name in CONFIG_FIELDS if getattr(args, name, None) is not None}
    if args.command == "grammar":
        if args.action == "build" and args.source:
            values["grammar"] = args.source
        else:
            args.input = args.source
            if args.action != "build" and args.input is None and _reads_piped_grammar(args):
                logger.info("Sin gramática explícita: leyendo la tabla desde stdin")
                args.input = "-"
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.log_level:
        logger.setLevel(getattr(logging, args.log_level))

    try:
        config = config_from_args(args)
        logger.debug(f"Configuración: {config.model_dump_json()}")
        return COMMANDS[args.command](config, args)
    except (InfeasibleTreeError, GrammarConstructionError, VerificationError) as e:
        logger.error(str(e))
        return EXIT_FAILED
    except ValidationError as e:
        logger.error(f"Configuración inválida: {e}")
        return EXIT_USAGE
    except (ArtOwenError, ValueError, FileNotFoundError) as e:
        logger.error(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
