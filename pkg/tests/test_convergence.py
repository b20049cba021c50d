# tests/test_convergence.py
"""
Pruebas de los experimentos de convergencia.
"""

import numpy as np
import pandas as pd
import pytest

from src.analysis.convergence import (
    fit_loglog_slope,
    gaussian_convergence,
    gaussian_integrand,
    gaussian_reference,
)
from src.analysis.samplers import SAMPLER_NAMES, make_sampler


# ---------- Tests ----------

def test_reference_matches_quadrature():
    c = (np.arange(1000) + 0.5) / 1000
    x, y = np.meshgrid(c, c)
    estimate = gaussian_integrand(np.column_stack([x.ravel(), y.ravel()])).mean()
    assert gaussian_reference() == pytest.approx(estimate, abs=1e-6)


def test_fit_slope_exact_power_law():
    table = pd.DataFrame({"n": [16, 32, 64, 128], "mse": [16.0 ** -3, 32.0 ** -3, 64.0 ** -3, 128.0 ** -3]})
    assert fit_loglog_slope(table) == pytest.approx(-3.0)


def test_requires_powers_of_two():
    with pytest.raises(ValueError):
        gaussian_convergence(make_sampler("uniform"), [16, 24], trials=2)


def test_uniform_slope_is_minus_one():
    table = gaussian_convergence(make_sampler("uniform"), [1 << k for k in range(4, 11)], trials=64, seed=1)
    assert list(table.columns) == ["n", "mse"]
    assert -1.4 < fit_loglog_slope(table) < -0.6


def test_samplers_are_deterministic_per_seed():
    for name in SAMPLER_NAMES:
        sampler = make_sampler(name, depth=32)
        a = sampler(9, 64)
        assert a.shape == (64, 2)
        assert np.array_equal(a, sampler(9, 64))
        assert ((a >= 0.0) & (a < 1.0)).all()


def test_unknown_sampler():
    with pytest.raises(ValueError):
        make_sampler("halton")


@pytest.mark.slow
def test_art_owen_converges_like_owen():
    """ART-Owen alcanza la tasa de Owen, MSE ~ n^-3, en la gaussiana."""
    n_values = [1 << k for k in range(4, 11)]
    art = fit_loglog_slope(gaussian_convergence(make_sampler("art"), n_values, trials=64, seed=2))
    owen = fit_loglog_slope(gaussian_convergence(make_sampler("owen"), n_values, trials=64, seed=2))
    assert art < -2.4
    assert owen < -2.4


@pytest.mark.slow
def test_slopes_from_16_to_16384_points():
    """Uniforme ~ n^-1 y ART-Owen ~ n^-3 entre 2^4 y 2^14 puntos (64 ensayos)."""
    n_values = [1 << k for k in range(4, 15)]
    uniform = fit_loglog_slope(gaussian_convergence(make_sampler("uniform"), n_values, trials=64))
    art = fit_loglog_slope(gaussian_convergence(make_sampler("art"), n_values, trials=64))
    assert -1.2 < uniform < -0.8
    assert -3.4 < art < -2.6


@pytest.mark.slow
def test_unscrambled_sobol_beats_n_minus_two_on_centered_gaussian():
    """La gaussiana centrada es simétrica en cada eje, así que Sobol sin aleatorizar cae mucho más rápido que n^-2."""
    n_values = [1 << k for k in range(4, 15)]
    sobol = fit_loglog_slope(gaussian_convergence(make_sampler("sobol"), n_values, trials=64))
    assert sobol < -3.5
