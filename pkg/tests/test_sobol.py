# tests/test_sobol.py
"""
Pruebas de la secuencia de Sobol en punto fijo y de la carga de números de dirección.
"""

import io
from pathlib import Path

import numpy as np
import pytest

from src.analysis.nets import net_check
from src.core.exceptions import DirectionNumbersError, IndexOutOfRangeError, SingularMatrixError
from src.sampling.sobol import (
    GeneratorMatrix,
    default_matrices,
    load_direction_numbers,
    sobol_point,
    sobol_points,
    sobol_unit_points,
    van_der_corput,
)

SAMPLE_FILE = Path(__file__).resolve().parent.parent / "data" / "new-joe-kuo-sample.txt"


# ---------- Fixtures ----------

@pytest.fixture(scope="module")
def matrices():
    """Dimensiones integradas (identidad y Pascal) con m = 32."""
    return default_matrices(2, 32)


# ---------- Tests ----------

def test_van_der_corput_examples():
    assert van_der_corput(1, 4) == 8
    assert van_der_corput(6, 4) == 6
    assert van_der_corput(0, 4) == 0
    with pytest.raises(IndexOutOfRangeError):
        van_der_corput(16, 4)


def test_first_points(matrices):
    """(0,0), (.5,.5), (.25,.75), (.75,.25)."""
    points = sobol_unit_points(4, matrices)
    assert points.tolist() == [[0.0, 0.0], [0.5, 0.5], [0.25, 0.75], [0.75, 0.25]]


def test_index_two_words(matrices):
    p = sobol_point(2, matrices)
    assert p.coords == (1 << 30, 3 << 30)


def test_scalar_and_vector_paths_agree(matrices):
    words = sobol_points(np.array([0, 5, 77, 1023, 123456]), matrices)
    for row, i in zip(words, [0, 5, 77, 1023, 123456]):
        assert tuple(int(c) for c in row) == sobol_point(i, matrices).coords


def test_index_out_of_range():
    small = default_matrices(2, 8)
    with pytest.raises(IndexOutOfRangeError):
        sobol_point(256, small)
    with pytest.raises(IndexOutOfRangeError):
        sobol_points(np.array([256]), small)


@pytest.mark.parametrize("k", [1, 4, 8, 10])
def test_prefix_is_zero_net(matrices, k):
    """Los primeros 2^k puntos forman una (0,k,2)-red."""
    assert net_check(sobol_points(1 << k, matrices), k, m=32)


def test_pascal_columns():
    pascal = GeneratorMatrix.pascal(4)
    assert pascal.columns == (0b1000, 0b1100, 0b1010, 0b1111)
    assert pascal.is_invertible()


def test_singular_matrix_rejected():
    with pytest.raises(SingularMatrixError):
        GeneratorMatrix((0b1000, 0b1000, 0b0010, 0b0001), 4)


def test_load_sample_file():
    """El registro d del archivo es la dimensión d-1."""
    mats = load_direction_numbers(SAMPLE_FILE, dims=8, m=32)
    assert len(mats) == 8
    assert mats[1] == GeneratorMatrix.pascal(32)
    # registro 3: s=2, a=1, m = 1 3
    assert mats[2].columns[:2] == (1 << 31, 3 << 30)
    for mat in mats:
        assert mat.is_invertible()


def test_load_rejects_bad_record():
    text = "d s a m_i\n2 1 0 1\n3 2 1 1 4\n"
    with pytest.raises(DirectionNumbersError) as info:
        load_direction_numbers(io.StringIO(text), dims=3)
    assert info.value.line == 3


def test_more_than_two_dims_need_file():
    with pytest.raises(DirectionNumbersError):
        load_direction_numbers(None, dims=3)
