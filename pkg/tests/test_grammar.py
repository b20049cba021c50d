# tests/test_grammar.py
"""
Pruebas de construcción y validación de gramáticas.
"""

import numpy as np
import pytest

from src.core.bits import make_rng
from src.core.exceptions import GrammarConstructionError, GrammarError
from src.sampling.grammar import (
    Grammar,
    build_grammar,
    build_ordered_grammar,
    build_random_grammar,
    build_tm_grammar,
    grammar_from_rules,
    single_symbol_grammar,
    thue_morse_word,
    tm_factors,
    tm_subword_complexity,
    tm_window_for_symbols,
    validate_grammar,
)


# ---------- Fixtures ----------

@pytest.fixture
def rng():
    return make_rng(1234, 0)


# ---------- Tests ----------

def test_thue_morse_prefix():
    assert thue_morse_word(8) == "01101001"
    assert thue_morse_word(16) == "0110100110010110"


def test_tm_window_one_is_two_symbols():
    g = build_tm_grammar(1)
    assert g.productions == ((0, 1), (1, 0))
    assert g.start == 0


def test_tm_window_two_table():
    """Factores 01, 11, 10, 00 en orden de aparición."""
    assert tm_factors(2) == ["01", "11", "10", "00"]
    g = build_tm_grammar(2)
    assert g.productions == ((0, 1), (2, 0), (2, 3), (0, 2))
    assert validate_grammar(g).clean


@pytest.mark.parametrize("n,expected", [(1, 2), (2, 4), (3, 6), (4, 10), (5, 12), (6, 16), (7, 20), (8, 22), (9, 24), (10, 28)])
def test_subword_complexity(n, expected):
    """La fórmula cerrada coincide con el conteo directo de factores."""
    assert tm_subword_complexity(n) == expected
    assert len(tm_factors(n)) == expected


def test_tm_grammars_are_clean():
    for window in range(1, 9):
        report = validate_grammar(build_tm_grammar(window))
        assert report.clean, f"ventana {window}: {report}"


def test_window_for_symbols():
    assert tm_window_for_symbols(2) == 1
    assert tm_window_for_symbols(16) == 6
    assert build_tm_grammar(tm_window_for_symbols(16)).n_symbols == 16
    with pytest.raises(GrammarError):
        tm_window_for_symbols(5)


def test_report_twins_and_unreachable():
    """La tabla 3,2;2,2;0,0;0,0 tiene gemelas y un símbolo inalcanzable."""
    g = grammar_from_rules([(3, 2), (2, 2), (0, 0), (0, 0)])
    report = validate_grammar(g)
    assert report.twin_rules == (1, 2, 3)
    assert report.unreachable == (1,)
    assert report.unproduced == (1,)
    assert report.fragmented
    assert not report.clean
    assert len(report.warnings()) == 3


def test_report_unproduced_symbol():
    g = grammar_from_rules([(1, 2), (3, 2), (1, 1), (1, 3)])
    assert validate_grammar(g).unproduced == (0,)


def test_symbols_at_level():
    g = build_tm_grammar(1)
    assert g.symbols_at_level(0).tolist() == [0]
    assert g.symbols_at_level(2).tolist() == [0, 1, 1, 0]
    assert g.symbols_at_level(3).tolist() == [0, 1, 1, 0, 1, 0, 0, 1]


def test_invalid_productions_rejected():
    with pytest.raises(GrammarError):
        Grammar(((0, 2), (1, 0)))
    with pytest.raises(GrammarError):
        Grammar(())
    with pytest.raises(GrammarError):
        Grammar(((0, 0),), start=1)


@pytest.mark.parametrize("n", [2, 3, 7, 31, 64])
def test_ordered_grammar_constraints(rng, n):
    """Sin reglas gemelas, todo símbolo producido y cima del árbol en anchura."""
    g = build_ordered_grammar(n, rng)
    report = validate_grammar(g)
    assert report.twin_rules == ()
    assert report.unproduced == ()
    assert report.unreachable == ()
    for k in range(n):
        for side, child in enumerate((2 * k + 1, 2 * k + 2)):
            if child < n:
                assert g.child(k, side) == child


def test_ordered_grammar_single_symbol():
    g = build_ordered_grammar(1, make_rng(0))
    assert g.productions == ((0, 0),)


def test_random_grammar_is_clean(rng):
    g = build_random_grammar(8, rng)
    assert validate_grammar(g).clean
    assert g.n_symbols == 8


@pytest.mark.parametrize("n", [2, 3, 64, 256])
def test_large_random_grammars_are_clean(n):
    """Las entradas gemelas o sin producir se corrigen en vez de descartar la tabla."""
    g = build_random_grammar(n, make_rng(11, n), attempts=50)
    assert g.n_symbols == n
    assert validate_grammar(g).clean


def test_random_grammar_is_deterministic():
    assert build_random_grammar(64, make_rng(3)) == build_random_grammar(64, make_rng(3))


def test_random_grammar_budget_exhausted(rng):
    """Con N=1 la única tabla posible es gemela."""
    with pytest.raises(GrammarConstructionError):
        build_random_grammar(1, rng, attempts=20)


def test_unconstrained_random_grammar_accepts_anything(rng):
    g = build_random_grammar(1, rng, enforce_constraints=False)
    assert g.productions == ((0, 0),)


def test_build_grammar_factory(rng):
    assert build_grammar("tm", window=2) == build_tm_grammar(2)
    assert build_grammar("tm", n_symbols=16).n_symbols == 16
    assert build_grammar("single") == single_symbol_grammar()
    assert build_grammar("ordered", rng, n_symbols=5).n_symbols == 5
    with pytest.raises(ValueError):
        build_grammar("ordered", None, n_symbols=5)
    with pytest.raises(ValueError):
        build_grammar("random", rng)
    with pytest.raises(ValueError):
        build_grammar("fractal", rng, n_symbols=4)


def test_grammar_table_is_read_only():
    g = build_tm_grammar(2)
    assert g.table.shape == (4, 2)
    with pytest.raises(ValueError):
        g.table[0, 0] = 3
    assert np.array_equal(g.table, np.array(g.productions))
