# tests/test_scan.py
"""
Pruebas del escaneo exhaustivo de la gramática de dos símbolos.
"""

import numpy as np
import pandas as pd
import pytest

from config.settings import settings
from src.analysis.quality import blue_noise_energy, conflict_radius
from src.core.bits import to_unit
from src.data.checkpoint import ScanCheckpoint, read_checkpoint, write_checkpoint
from src.optimize.objective import Objective
from src.optimize.scan import (
    average_code_spectrum,
    code_points,
    code_to_scrambler,
    code_vectors,
    evaluate_codes,
    exhaustive_scan,
    rank_results,
)
from src.sampling.sobol import default_matrices, sobol_points


# ---------- Fixtures ----------

@pytest.fixture
def small_chunks(monkeypatch):
    """Segmentos de 256 códigos para rangos pequeños."""
    monkeypatch.setattr(settings, "scan_chunk_log2", 8)


@pytest.fixture
def manual_table():
    return pd.DataFrame({
        "code": np.array([5, 3, 4, 1], dtype=np.int64),
        "conflict_radius": [0.1, 0.3, 0.3, 0.25],
        "energy": [np.nan, 10.0, 5.0, 20.0],
        "feasible": [False, True, True, True],
    })


# ---------- Helpers ----------

SAMPLE_CODES = [0x00000000, 0x8001C3A5, 0xDEADBEEF, 0x12345678, 0xFFFFFFFF]


def _brute_force(codes, objective, top_k):
    return rank_results(evaluate_codes(codes, objective), objective, top_k)


# ---------- Tests: códigos ----------

def test_code_vectors():
    assert code_vectors(0x11223344) == ((0x11, 0x22), (0x33, 0x44))
    with pytest.raises(ValueError):
        code_vectors(1 << 32)


@pytest.mark.parametrize("code", SAMPLE_CODES)
def test_code_points_match_scrambler(code):
    """La tabla precalculada coincide con el scrambler completo."""
    words = code_to_scrambler(code).scramble_points(sobol_points(256, default_matrices(2, 32)))
    np.testing.assert_array_equal(code_points(code), to_unit(words, 32))


def test_code_points_are_a_net():
    """Cada columna de la rejilla 256 x 256 tiene exactamente un punto."""
    pts = code_points(0xDEADBEEF)
    assert sorted((pts[:, 0] * 256).astype(int).tolist()) == list(range(256))
    assert sorted((pts[:, 1] * 256).astype(int).tolist()) == list(range(256))


# ---------- Tests: evaluación ----------

def test_evaluate_codes_matches_direct_metrics():
    table = evaluate_codes(SAMPLE_CODES, Objective("energy"))
    assert table["code"].tolist() == SAMPLE_CODES
    for row in table.itertuples():
        pts = code_points(row.code)
        assert row.conflict_radius == pytest.approx(conflict_radius(pts), rel=1e-9)
        assert row.energy == pytest.approx(blue_noise_energy(pts, 0.5), rel=1e-9)


def test_combined_skips_energy_of_infeasible():
    table = evaluate_codes(SAMPLE_CODES, Objective("combined", r_target=0.5))
    infeasible = ~table["feasible"]
    assert table.loc[infeasible, "energy"].isna().all()
    assert table.loc[table["feasible"], "energy"].notna().all()


def test_rank_results_orders(manual_table):
    combined = rank_results(manual_table, Objective("combined"))
    assert combined["code"].tolist() == [4, 3, 1, 5]
    conflict = rank_results(manual_table, Objective("conflict"))
    assert conflict["code"].tolist() == [3, 4, 1, 5]
    assert rank_results(manual_table, Objective("combined"), top_k=2)["code"].tolist() == [4, 3]


# ---------- Tests: escaneo ----------

def test_scan_matches_brute_force(small_chunks):
    """Un rango que cruza los 16 bits altos equivale a evaluar código a código."""
    obj = Objective("conflict")
    start, end = 0x0001FF00, 0x00020100
    result = exhaustive_scan(obj, (start, end), top_k=20, workers=1)
    expected = _brute_force(range(start, end), obj, 20)
    pd.testing.assert_frame_equal(result, expected)


def test_scan_resumes_from_checkpoint(small_chunks, tmp_path):
    obj = Objective("conflict")
    path = tmp_path / "scan.arrow"
    first_half = exhaustive_scan(obj, (0, 1024), top_k=10, workers=1)
    meta = {"kind": "conflict", "r_target": obj.r_target, "sigma": obj.sigma}
    write_checkpoint(path, ScanCheckpoint(0, 2048, 1024, meta, first_half))

    resumed = exhaustive_scan(obj, (0, 2048), top_k=10, workers=1, checkpoint=path)
    fresh = exhaustive_scan(obj, (0, 2048), top_k=10, workers=1)
    pd.testing.assert_frame_equal(resumed, fresh)
    assert read_checkpoint(path).done


def test_scan_ignores_foreign_checkpoint(small_chunks, tmp_path):
    """Un checkpoint de otro objetivo no se reutiliza."""
    obj = Objective("conflict")
    path = tmp_path / "scan.arrow"
    bogus = exhaustive_scan(obj, (0, 256), top_k=5, workers=1)
    meta = {"kind": "energy", "r_target": 0.2, "sigma": 0.5}
    write_checkpoint(path, ScanCheckpoint(0, 512, 256, meta, bogus))

    result = exhaustive_scan(obj, (0, 512), top_k=5, workers=1, checkpoint=path)
    pd.testing.assert_frame_equal(result, exhaustive_scan(obj, (0, 512), top_k=5, workers=1))


def test_scan_rejects_bad_range():
    with pytest.raises(ValueError):
        exhaustive_scan(Objective(), (10, 10))
    with pytest.raises(ValueError):
        exhaustive_scan(Objective(), (0, (1 << 32) + 1))


@pytest.mark.slow
def test_scan_independent_of_workers(small_chunks):
    obj = Objective("combined", r_target=0.3)
    one = exhaustive_scan(obj, (0, 4096), top_k=50, workers=1)
    two = exhaustive_scan(obj, (0, 4096), top_k=50, workers=2)
    pd.testing.assert_frame_equal(one, two)


def test_average_code_spectrum():
    spectrum = average_code_spectrum([1, 2], 16)
    assert spectrum.power.shape == (16, 16)
    with pytest.raises(ValueError):
        average_code_spectrum([], 16)


@pytest.mark.slow
def test_scanned_best_beats_typical_code():
    """El mejor de 2^20 códigos consecutivos supera en un 20% el r_f mediano de códigos al azar."""
    obj = Objective("conflict")
    rng = np.random.default_rng(60)
    start = int(rng.integers(0, 1 << 12)) << 20
    best = exhaustive_scan(obj, (start, start + (1 << 20)), top_k=1, workers=1)
    typical = evaluate_codes(rng.integers(0, 1 << 32, size=201).tolist(), obj)
    assert best["conflict_radius"].iloc[0] >= 1.2 * typical["conflict_radius"].median()
