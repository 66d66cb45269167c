import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pitchrater.ratings import (PiConfig, PiEngine, PiRating, PiState, pi_expected_gd, pi_update,
                                psi, rating_to_gd)

from conftest import match

# lam * 3 * log10(3) with lam = 0.1, and half of it (gamma = 0.5); mpmath, 40 digits
STEP = 0.14313637641589873119
HALF = 0.07156818820794936559


def test_expected_gd_examples():
    zero = PiState()
    assert pi_expected_gd(zero, "a", "b") == 0
    assert pi_expected_gd(PiState({"a": PiRating(3, 0)}), "a", "b", PiConfig(b=10, c=3)) == 9
    assert pi_expected_gd(PiState({"b": PiRating(0, -3)}), "a", "b") == 9


def test_psi_values():
    assert psi(0) == 0
    assert psi(9) == 3


@given(st.floats(0, 50), st.floats(0, 50))
def test_psi_strictly_increasing(e1, e2):
    # below ~1e-9 apart the difference is lost to float rounding
    if e2 - e1 > 1e-9:
        assert psi(e1) < psi(e2)


def test_update_no_error_no_change():
    state = PiState({"a": PiRating(3, 1), "b": PiRating(0, 0)})
    # expected gd is 9, so a 9-0 win is exactly on expectation
    assert pi_update(state, match("a", "b", 9, 0)).ratings == state.ratings


def test_update_two_nil_from_zero():
    new = pi_update(PiState(), match("a", "b", 2, 0), PiConfig(lam=0.1, gamma=0.5))
    a, b = new.ratings["a"], new.ratings["b"]
    assert a.home == pytest.approx(STEP, abs=1e-12)
    assert a.away == pytest.approx(HALF, abs=1e-12)
    assert b.away == pytest.approx(-STEP, abs=1e-12)
    assert b.home == pytest.approx(-HALF, abs=1e-12)


def test_update_underperformance_moves_down():
    state = PiState({"a": PiRating(3, 0)})
    new = pi_update(state, match("a", "b", 1, 0), PiConfig(lam=0.1, gamma=0.5))
    # expected 9, scored 1: error 8 against the home side
    step = 0.1 * 3 * math.log10(9)
    assert new.ratings["a"].home == pytest.approx(3 - step)
    assert new.ratings["b"].away == pytest.approx(step)


@given(st.floats(-5, 5))
def test_rating_to_gd_is_odd(r):
    assert rating_to_gd(-r) == -rating_to_gd(r)


def test_engine_overall_is_mean():
    e = PiEngine(PiConfig(lam=0.2, gamma=0.3))
    for i, (h, a, hg, ag) in enumerate([("a", "b", 3, 1), ("b", "c", 0, 0), ("c", "a", 1, 2)]):
        e.update(match(h, a, hg, ag, day=i))
    for team in "abc":
        comp = e.components(team)
        assert comp["overall"] == (comp["home"] + comp["away"]) / 2
