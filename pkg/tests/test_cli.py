# tests/test_cli.py
"""
Pruebas de extremo a extremo de la CLI (artowen_cli.main).
"""

import io
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from artowen_cli import main
from config.settings import settings
from src.data.formats import format_grammar, read_pgm, read_points_bin, read_points_words, read_scramble_data
from src.sampling.grammar import build_tm_grammar


# ---------- Helpers ----------

def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# ---------- Tests: points ----------

def test_points_unscrambled(capsys):
    code, out = _run(capsys, "points", "--scramble", "none", "--n", "4", "--m", "32")
    assert code == 0
    assert out.splitlines() == ["0 0", "0.5 0.5", "0.25 0.75", "0.75 0.25"]


def test_points_are_reproducible(capsys):
    args = ("points", "--seed", "3", "--n", "16", "--grammar", "tm", "--window", "2")
    _, first = _run(capsys, *args)
    _, second = _run(capsys, *args)
    _, other = _run(capsys, "points", "--seed", "4", "--n", "16", "--grammar", "tm", "--window", "2")
    assert first == second
    assert first != other
    assert len(first.splitlines()) == 16


def test_points_depth_zero_is_unscrambled(capsys):
    """Sin niveles aleatorizados ART-Owen deja la secuencia intacta."""
    _, plain = _run(capsys, "points", "--scramble", "none", "--n", "32")
    _, art = _run(capsys, "points", "--scramble", "art", "--depth", "0", "--n", "32")
    assert art == plain


def test_points_binary_needs_out(tmp_path, capsys):
    assert _run(capsys, "points", "--format", "bin", "--n", "4")[0] == 2
    path = tmp_path / "p.bin"
    assert _run(capsys, "points", "--scramble", "none", "--format", "bin", "--n", "4", "--m", "32", "--out", str(path))[0] == 0
    assert path.stat().st_size == 4 * 2 * 8
    words = read_points_words(path)
    assert np.all((words & np.uint64(0xFFFFFFFF)) == 0)
    assert read_points_bin(path).tolist() == [[0.0, 0.0], [0.5, 0.5], [0.25, 0.75], [0.75, 0.25]]


def test_points_with_direction_numbers_file(capsys):
    sample = Path(__file__).resolve().parent.parent / "data" / "new-joe-kuo-sample.txt"
    code, out = _run(capsys, "points", "--dims", "4", "--n", "64", "--direction-numbers", str(sample))
    assert code == 0
    rows = [line.split() for line in out.splitlines()]
    assert len(rows) == 64 and all(len(row) == 4 for row in rows)
    assert main(["points", "--dims", "4", "--n", "4"]) == 2


def test_usage_errors(capsys):
    assert main(["points", "--bogus"]) == 2
    assert main(["points", "--m", "40"]) == 2
    assert main([]) == 2


# ---------- Tests: grammar ----------

def test_grammar_build(capsys):
    code, out = _run(capsys, "grammar", "build", "tm", "--window", "2")
    assert code == 0
    assert out.splitlines()[0].split()[0] == "4"
    assert len(out.splitlines()) == 5


def test_grammar_validate_strict(capsys):
    code, out = _run(capsys, "grammar", "validate", "--rules", "3,2;2,2;0,0;0,0")
    assert code == 0
    assert "twin_rules: [1, 2, 3]" in out
    assert "clean: false" in out
    assert _run(capsys, "grammar", "validate", "--rules", "3,2;2,2;0,0;0,0", "--strict")[0] == 1


def test_grammar_validate_file(tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("2 0\n0 1\n1 0\n")
    code, out = _run(capsys, "grammar", "validate", str(path), "--strict")
    assert code == 0
    assert "clean: true" in out


def test_grammar_validate_reads_piped_table(monkeypatch, capsys):
    """Sin fuente ni flags de gramática se valida la tabla que llega por stdin."""
    monkeypatch.setattr("sys.stdin", io.StringIO(format_grammar(build_tm_grammar(2))))
    code, out = _run(capsys, "grammar", "validate", "--strict")
    assert code == 0
    assert "symbols: 4" in out
    assert "clean: true" in out


def test_grammar_flags_win_over_piped_table(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(format_grammar(build_tm_grammar(2))))
    code, out = _run(capsys, "grammar", "validate", "--grammar", "ordered", "--symbols", "7")
    assert code == 0
    assert "symbols: 7" in out


def test_random_grammar_out_of_attempts_fails(monkeypatch, capsys):
    """Agotar los intentos de construcción es un fallo (1), no un error de uso."""
    monkeypatch.setattr(settings, "grammar_attempts", 5)
    assert main(["grammar", "build", "random", "--symbols", "1"]) == 1
    assert main(["points", "--grammar", "random", "--symbols", "1", "--n", "4"]) == 1


def test_points_with_large_random_grammar(capsys):
    code, out = _run(capsys, "points", "--grammar", "random", "--symbols", "64", "--n", "8")
    assert code == 0
    assert len(out.splitlines()) == 8


def test_grammar_solve_ordered(capsys):
    code, out = _run(
        capsys, "grammar", "solve", "--grammar", "ordered", "--symbols", "31",
        "--tree-depth", "4", "--m", "8", "--depth", "8",
    )
    assert code == 0
    tables = read_scramble_data(io.StringIO(out), m=8)
    assert tables[0].n_symbols == 31


def test_grammar_solve_infeasible(capsys):
    code = main(["grammar", "solve", "--grammar", "single", "--tree", "0,10", "--m", "8", "--depth", "8"])
    assert code == 1


def test_grammar_bitmap(tmp_path, capsys):
    path = tmp_path / "bits.pgm"
    assert _run(capsys, "grammar", "bitmap", "--rules", "0,0", "--tree-depth", "3", "--out", str(path))[0] == 0
    assert read_pgm(path).shape == (9, 3)


# ---------- Tests: análisis ----------

def test_spectrum_csv_and_pgm(tmp_path, capsys):
    csv = tmp_path / "radial.csv"
    args = ("spectrum", "--sampler", "uniform", "--realizations", "2", "--n", "16", "--resolution", "8")
    assert _run(capsys, *args, "--format", "csv", "--out", str(csv))[0] == 0
    table = pd.read_csv(csv)
    assert table["radius"].tolist() == [1, 2, 3]
    pgm = tmp_path / "spec.pgm"
    assert _run(capsys, *args, "--out", str(pgm))[0] == 0
    assert read_pgm(pgm).shape == (8, 8)


def test_zoneplate_metric(tmp_path, capsys):
    path = tmp_path / "zp.pgm"
    code, out = _run(
        capsys, "zoneplate", "--scramble", "none", "--resolution", "16", "--spp", "1", "--metric", "--out", str(path)
    )
    assert code == 0
    assert out.startswith("ring_artifact_energy: ")
    assert read_pgm(path).shape == (16, 16)


def test_converge_table(capsys):
    code, out = _run(
        capsys, "converge", "--samplers", "uniform,sobol", "--min-log2", "2", "--max-log2", "4", "--trials", "3"
    )
    assert code == 0
    table = pd.read_csv(io.StringIO(out))
    assert list(table.columns) == ["sampler", "n", "mse", "slope"]
    assert table["sampler"].tolist() == ["uniform"] * 3 + ["sobol"] * 3
    assert table["n"].tolist() == [4, 8, 16] * 2


@pytest.mark.slow
def test_converge_art_slope_near_minus_three(capsys):
    code, out = _run(capsys, "converge", "--samplers", "art", "--min-log2", "4", "--max-log2", "14", "--trials", "64")
    assert code == 0
    slope = pd.read_csv(io.StringIO(out))["slope"].iloc[0]
    assert -3.4 < slope < -2.6


# ---------- Tests: optimize / scan / enumerate ----------

def test_optimize_writes_data(tmp_path, capsys):
    path = tmp_path / "data.txt"
    args = (
        "optimize", "--grammar", "tm", "--window", "1", "--depth", "8", "--m", "8", "--n", "64",
        "--attempts", "2", "--max-sweeps", "1", "--objective", "conflict",
    )
    assert _run(capsys, *args, "--out", str(path))[0] == 0
    tables = read_scramble_data(path, m=8)
    assert len(tables) == 2
    assert all(t.n_symbols == 2 for t in tables)
    assert _run(capsys, *args, "--r-target", "10", "--strict")[0] == 1


def test_scan_top_codes(capsys):
    code, out = _run(capsys, "scan", "--start", "0", "--end", "0x100", "--top-k", "5", "--objective", "conflict")
    assert code == 0
    table = pd.read_csv(io.StringIO(out))
    assert list(table.columns) == ["code", "conflict_radius", "energy", "feasible"]
    assert len(table) == 5
    assert table["conflict_radius"].is_monotonic_decreasing


def test_enumerate_pixel(capsys):
    code, out = _run(
        capsys, "enumerate", "--pixel", "0", "0", "--grid-log2", "1", "--n", "4", "--scramble", "none", "--m", "32"
    )
    assert code == 0
    assert out.splitlines() == ["0"]
