# tests/test_spectrum.py
"""
Pruebas de periodogramas y perfiles radiales.
"""

import numpy as np
import pytest

from src.analysis.samplers import UniformSampler, make_sampler
from src.analysis.spectrum import (
    average_periodogram,
    periodogram,
    profile_distance,
    radial_average,
    spike_ratio,
)
from src.core.bits import make_rng, to_unit
from src.sampling.sobol import default_matrices, sobol_points


# ---------- Helpers ----------

def _regular_grid(side):
    c = (np.arange(side) + 0.5) / side
    x, y = np.meshgrid(c, c)
    return np.column_stack([x.ravel(), y.ravel()])


# ---------- Tests ----------

def test_regular_grid_peaks():
    """Una rejilla 16x16 solo tiene potencia en múltiplos de 16."""
    s = periodogram(_regular_grid(16), 64)
    center = 32
    assert s.dc == pytest.approx(256.0)
    assert s.power[center + 16, center] == pytest.approx(256.0)
    assert s.power[center, center - 16] == pytest.approx(256.0)
    assert s.power[center + 1, center] == pytest.approx(0.0, abs=1e-8)
    assert s.power[center + 5, center + 7] == pytest.approx(0.0, abs=1e-8)


def test_periodogram_rejects_bad_shape():
    with pytest.raises(ValueError):
        periodogram(np.zeros((4, 3)), 8)
    with pytest.raises(ValueError):
        periodogram(np.zeros((0, 2)), 8)


def test_radial_average_bands():
    s = periodogram(_regular_grid(16), 64)
    profile = radial_average(s)
    assert list(profile.columns) == ["radius", "power", "bins"]
    assert profile["radius"].tolist() == list(range(1, 32))
    assert (profile["bins"] > 0).all()
    # la única banda con potencia es la del pico de radio 16
    peak = profile.loc[profile["power"].idxmax(), "radius"]
    assert peak == 16


def test_uniform_spectrum_is_flat():
    """El ruido blanco tiene potencia media 1 fuera del DC."""
    s = average_periodogram(UniformSampler(), 64, 256, 32, seed=3)
    profile = radial_average(s)
    assert np.allclose(profile["power"], 1.0, atol=0.25)
    assert s.realizations == 64


def test_average_is_independent_of_workers():
    sampler = make_sampler("art")
    one = average_periodogram(sampler, 20, 64, 16, seed=5, workers=1)
    many = average_periodogram(sampler, 20, 64, 16, seed=5, workers=4)
    assert np.array_equal(one.power, many.power)


def test_scrambled_sobol_has_low_frequency_hole():
    """Los conjuntos ART-Owen tienen menos potencia que el ruido blanco a baja frecuencia."""
    art = radial_average(average_periodogram(make_sampler("art"), 16, 256, 32, seed=1))
    white = radial_average(average_periodogram(UniformSampler(), 16, 256, 32, seed=1))
    assert art["power"].iloc[:3].mean() < 0.5 * white["power"].iloc[:3].mean()


def test_profile_distance_and_spike_ratio():
    s = average_periodogram(UniformSampler(), 8, 128, 16, seed=2)
    profile = radial_average(s)
    assert profile_distance(profile, profile) == 0.0
    assert spike_ratio(s, profile) >= 1.0


def test_power_is_symmetric_through_dc():
    """Puntos reales: P(f) = P(-f)."""
    points = make_rng(5).random((100, 2))
    power = periodogram(points, 32).power[1:, 1:]
    np.testing.assert_allclose(power, power[::-1, ::-1], rtol=1e-9, atol=1e-9)


def test_power_averages_to_one_over_a_full_period():
    """Puntos distintos sobre la rejilla 1/R: la media de P en R x R frecuencias es 1."""
    words = sobol_points(64, default_matrices(2, 32))
    s = periodogram(to_unit(words, 32), 64)
    assert s.dc == pytest.approx(64.0)
    assert s.power.mean() == pytest.approx(1.0)


@pytest.mark.slow
def test_art_owen_spectrum_matches_owen_and_xor_has_spikes():
    """1000 realizaciones de 256 puntos: perfil ART-Owen ~ Owen; el XOR muestra picos."""
    owen = average_periodogram(make_sampler("owen", depth=8), 1000, 256, 128, seed=4)
    art = average_periodogram(make_sampler("art"), 1000, 256, 128, seed=4)
    xor = average_periodogram(make_sampler("xor"), 1000, 256, 128, seed=4)
    owen_profile = radial_average(owen)
    assert profile_distance(radial_average(art), owen_profile) < 0.05
    assert spike_ratio(xor, owen_profile) > 5.0
