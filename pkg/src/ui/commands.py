"""
Comandos de la CLI de ArtOwen.

Cada comando recibe la RunConfig y los argumentos ya parseados y devuelve el
código de salida (0 éxito, 1 comprobación fallida). Las salidas de datos van
a --out o a stdout; el logging va a stderr.
"""

import sys
from argparse import Namespace
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd

from src.analysis.convergence import fit_loglog_slope, gaussian_convergence
from src.analysis.samplers import OWEN_ORACLE_DEPTH, make_sampler
from src.analysis.spectrum import average_periodogram, radial_average
from src.analysis.zoneplate import ring_artifact_energy, zoneplate, zoneplate_reference
from src.core.bits import make_rng, mix_seed, to_unit
from src.core.exceptions import VerificationError
from src.core.logger import logger
from src.data.formats import (
    bitmap_image,
    format_grammar,
    format_scramble_data,
    parse_rules,
    read_grammar,
    spectrum_image,
    write_csv,
    write_pgm,
    write_points,
    write_points_bin,
)
from src.optimize.greedy import greedy_optimize
from src.optimize.objective import Objective
from src.optimize.scan import average_code_spectrum, exhaustive_scan
from src.sampling.enumeration import enumerate_pixel_samples
from src.sampling.grammar import Grammar, validate_grammar
from src.sampling.scrambler import (
    ArtOwenScrambler,
    ExplicitTree,
    ScrambleData,
    burley_hash_scramble,
    expand_to_tree,
    explicit_owen_scramble,
    xor_scramble,
)
from src.sampling.sobol import GeneratorMatrix, default_matrices, sobol_points
from src.solver.gf2map import build_bit_map, solve_for_tree, utilization_report
from src.ui.config import OPTIMIZE_STREAM, TREE_STREAM, RunConfig

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

Command = Callable[[RunConfig, Namespace], int]


# ---------- Helpers ----------

def _emit_text(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info(f"Salida escrita en {out}")
    else:
        sys.stdout.write(text)


def _emit_table(table: pd.DataFrame, out: Optional[str]) -> None:
    write_csv(table, out if out else sys.stdout)


def _require_out(config: RunConfig, what: str) -> str:
    if not config.out:
        raise ValueError(f"{what} necesita --out")
    return config.out


def _matrices(config: RunConfig, dims: Optional[int] = None) -> Tuple[GeneratorMatrix, ...]:
    return default_matrices(dims or config.dims, config.m, config.direction_numbers)


def _scrambler(config: RunConfig, grammar: Optional[Grammar] = None, dims: int = 2) -> ArtOwenScrambler:
    grammar = grammar or config.build_grammar()
    return ArtOwenScrambler.random(grammar, dims, config.seed, config.effective_depth, config.m)


def _load_grammar(config: RunConfig, args: Namespace) -> Grammar:
    source = getattr(args, "input", None)
    rules = getattr(args, "rules", None)
    if rules:
        return parse_rules(rules)
    if source == "-":
        return read_grammar(sys.stdin)
    if source:
        return read_grammar(source)
    return config.build_grammar()


# ---------- points ----------

def cmd_points(config: RunConfig, args: Namespace) -> int:
    """Genera n puntos de Sobol con el scrambling elegido."""
    m = config.m
    words = sobol_points(config.n, _matrices(config))
    kind = args.scramble
    if kind == "art":
        words = _scrambler(config, dims=config.dims).scramble_points(words)
    elif kind == "xor":
        for dim in range(config.dims):
            code = int(make_rng(config.seed, dim).integers(0, 1 << m, dtype=np.uint64))
            words[:, dim] = xor_scramble(words[:, dim], code)
    elif kind == "burley":
        for dim in range(config.dims):
            words[:, dim] = burley_hash_scramble(words[:, dim], mix_seed(config.seed, dim) & 0xFFFFFFFF, m)
    elif kind == "owen":
        for dim in range(config.dims):
            rng = make_rng(config.seed, dim)
            tree = ExplicitTree.random(min(config.effective_depth, OWEN_ORACLE_DEPTH), rng)
            words[:, dim] = explicit_owen_scramble(words[:, dim], tree, rng, m)

    fmt = config.format or "txt"
    if fmt not in ("txt", "bin"):
        raise ValueError(f"points solo admite --format txt o bin, no {fmt}")
    if fmt == "bin":
        write_points_bin(words, m, _require_out(config, "--format bin"))
    else:
        write_points(to_unit(words, m), config.out or sys.stdout)
    logger.info(f"{config.n} puntos generados ({kind}, {config.dims} dimensiones)")
    return EXIT_OK


# ---------- grammar ----------

def _report_lines(grammar: Grammar) -> Tuple[str, bool]:
    report = validate_grammar(grammar)
    lines = [
        f"symbols: {grammar.n_symbols}",
        f"start: {grammar.start}",
        f"twin_rules: {list(report.twin_rules)}",
        f"unreachable: {list(report.unreachable)}",
        f"unproduced: {list(report.unproduced)}",
        f"fragmented: {str(report.fragmented).lower()}",
        f"clean: {str(report.clean).lower()}",
    ]
    for warning in report.warnings():
        logger.warning(f"Gramática: {warning}")
    return "\n".join(lines) + "\n", report.clean


def cmd_grammar(config: RunConfig, args: Namespace) -> int:
    """build | validate | solve | bitmap."""
    action = args.action

    if action == "build":
        grammar = config.build_grammar()
        _emit_text(format_grammar(grammar), config.out)
        return EXIT_OK

    grammar = _load_grammar(config, args)

    if action == "validate":
        text, clean = _report_lines(grammar)
        _emit_text(text, config.out)
        if config.strict and not clean:
            logger.error("Validación estricta fallida")
            return EXIT_FAILED
        return EXIT_OK

    if action == "solve":
        if args.tree:
            target = ExplicitTree.from_string(args.tree)
        else:
            target = ExplicitTree.random(args.tree_depth, config.rng(TREE_STREAM))
        data = solve_for_tree(grammar, target, config.m)
        check = ArtOwenScrambler(grammar, (data,), target.depth, config.m)
        if expand_to_tree(check, 0, target.depth) != target:
            raise VerificationError("Los datos resueltos no reproducen el árbol objetivo")
        logger.info(f"Árbol de profundidad {target.depth} reproducido exactamente")
        _emit_text(format_scramble_data([data]), config.out)
        return EXIT_OK

    if action == "bitmap":
        system = build_bit_map(grammar, args.tree_depth)
        usage = utilization_report(system)
        logger.info(
            f"Mapa GF(2): rango {system.rank()} de {system.n_rows} filas, "
            f"{len(usage.unused_columns())} columnas sin uso"
        )
        write_pgm(bitmap_image(system), _require_out(config, "grammar bitmap"))
        return EXIT_OK

    raise ValueError(f"Acción desconocida: {action}")


# ---------- spectrum / zoneplate / converge ----------

def cmd_spectrum(config: RunConfig, args: Namespace) -> int:
    grammar = config.build_grammar() if args.sampler == "art" else None
    sampler = make_sampler(args.sampler, grammar, config.effective_depth, config.m)
    spectrum = average_periodogram(
        sampler, args.realizations, config.n, args.resolution, config.seed, config.workers
    )
    fmt = config.format or ("pgm" if config.out and config.out.endswith(".pgm") else "csv")
    if fmt == "pgm":
        write_pgm(spectrum_image(spectrum), _require_out(config, "--format pgm"))
    elif fmt == "csv":
        _emit_table(radial_average(spectrum), config.out)
    else:
        raise ValueError(f"spectrum solo admite --format pgm o csv, no {fmt}")
    return EXIT_OK


def cmd_zoneplate(config: RunConfig, args: Namespace) -> int:
    scrambler = None if args.scramble == "none" else _scrambler(config)
    image = zoneplate(scrambler, args.resolution, args.spp, _matrices(config, 2))
    write_pgm(image, _require_out(config, "zoneplate"))
    if args.metric:
        energy = ring_artifact_energy(image, zoneplate_reference(args.resolution))
        sys.stdout.write(f"ring_artifact_energy: {energy:.6e}\n")
    return EXIT_OK


def cmd_converge(config: RunConfig, args: Namespace) -> int:
    names = [s.strip() for s in args.samplers.split(",") if s.strip()]
    n_values = [1 << k for k in range(args.min_log2, args.max_log2 + 1)]
    tables = []
    for name in names:
        grammar = config.build_grammar() if name == "art" else None
        sampler = make_sampler(name, grammar, config.effective_depth, config.m)
        table = gaussian_convergence(sampler, n_values, args.trials, config.seed)
        slope = fit_loglog_slope(table)
        logger.info(f"Pendiente log-log de {name}: {slope:.3f}")
        table.insert(0, "sampler", name)
        table["slope"] = slope
        tables.append(table)
    _emit_table(pd.concat(tables, ignore_index=True), config.out)
    return EXIT_OK


# ---------- optimize / scan ----------

def _objective(args: Namespace) -> Objective:
    return Objective(args.objective, args.r_target, args.sigma)


def cmd_optimize(config: RunConfig, args: Namespace) -> int:
    grammar = config.build_grammar()
    depth = config.effective_depth
    initial = tuple(ScrambleData.random(grammar.n_symbols, make_rng(config.seed, d), depth, config.m) for d in range(2))
    objective = _objective(args)
    result = greedy_optimize(
        grammar,
        initial,
        objective,
        attempts_per_symbol=args.attempts,
        rng=config.rng(OPTIMIZE_STREAM),
        n_points=config.n,
        max_sweeps=args.max_sweeps,
    )
    logger.info(
        f"Optimización: r_f={result.score.conflict_radius:.4f}, "
        f"{result.accepted} cambios en {result.sweeps} barridos"
    )
    _emit_text(format_scramble_data(result.data), config.out)
    if config.strict and not objective.feasible(result.score):
        logger.error(f"Objetivo r_f >= {objective.r_target} no alcanzado")
        return EXIT_FAILED
    return EXIT_OK


def cmd_scan(config: RunConfig, args: Namespace) -> int:
    start = int(args.start, 0)
    end = int(args.end, 0)
    table = exhaustive_scan(
        _objective(args), (start, end), top_k=args.top_k, workers=config.workers, checkpoint=args.checkpoint
    )
    _emit_table(table, config.out)
    if args.spectrum_out:
        spectrum = average_code_spectrum(table["code"].tolist(), args.resolution)
        write_pgm(spectrum_image(spectrum), args.spectrum_out)
    return EXIT_OK


# ---------- enumerate ----------

def cmd_enumerate(config: RunConfig, args: Namespace) -> int:
    scrambler = None if args.scramble == "none" else _scrambler(config)
    indices = enumerate_pixel_samples(
        scrambler, _matrices(config, 2), tuple(args.pixel), args.grid_log2, config.n
    )
    _emit_text("".join(f"{i}\n" for i in indices), config.out)
    return EXIT_OK
