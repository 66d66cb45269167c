import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pitchrater.ratings import (BerrarConfig, BerrarEngine, BerrarRating, BerrarState,
                                berrar_expect, berrar_tune, berrar_update)
from pitchrater.simulate import SimLeague, gen_league

from conftest import match

# 4 / (1 + exp(-10)) with mpmath, 40 digits
G_DIFF10 = 3.9998184085251902624


def cfg(**kw):
    base = dict(alpha_h=4, alpha_a=4, beta_h=1, beta_a=1, gamma_h=0, gamma_a=0)
    base.update(kw)
    return BerrarConfig(**base)


def test_expect_midpoint():
    assert berrar_expect(BerrarState(), "a", "b", cfg())[0] == 2.0


def test_expect_large_difference():
    state = BerrarState({"a": BerrarRating(10, 0)})
    assert berrar_expect(state, "a", "b", cfg())[0] == pytest.approx(G_DIFF10, abs=1e-14)


def test_expect_zero_slope():
    state = BerrarState({"a": BerrarRating(7, -2), "b": BerrarRating(1, 3)})
    c = cfg(beta_h=0, gamma_h=0.4)
    assert berrar_expect(state, "a", "b", c)[0] == pytest.approx(4 / (1 + math.exp(-0.4)), abs=1e-15)


def test_update_exact_prediction_no_change():
    # fresh ratings, gammas 0 => both expectations are 2
    state = BerrarState()
    new = berrar_update(state, match("a", "b", 2, 2), cfg())
    assert new.ratings["a"] == BerrarRating(0, 0) and new.ratings["b"] == BerrarRating(0, 0)


def test_update_offence_and_defence_steps():
    new = berrar_update(BerrarState(), match("a", "b", 3, 2), cfg(omega=(0.1, 0.2, 0.1, 0.1)))
    assert new.ratings["a"].offence == pytest.approx(0.1)


def test_update_defence_step():
    # gamma_a chosen so the away expectation is exactly 1.5: 4 / (1 + e^-g) = 1.5
    gamma_a = -math.log(4 / 1.5 - 1)
    c = cfg(gamma_a=gamma_a, omega=(0.1, 0.2, 0.1, 0.1))
    assert berrar_expect(BerrarState(), "a", "b", c)[1] == pytest.approx(1.5, abs=1e-15)
    new = berrar_update(BerrarState(), match("a", "b", 2, 0), c)
    assert new.ratings["a"].defence == pytest.approx(-0.3, abs=1e-12)


def test_update_uses_pre_update_expectations():
    c = cfg(omega=(0.1, 0.2, 0.3, 0.4))
    state = BerrarState({"a": BerrarRating(0.5, -0.2), "b": BerrarRating(-0.1, 0.3)})
    eh, ea = berrar_expect(state, "a", "b", c)
    new = berrar_update(state, match("a", "b", 1, 3), c)
    assert new.ratings["a"] == BerrarRating(0.5 + 0.1 * (1 - eh), -0.2 + 0.2 * (3 - ea))
    assert new.ratings["b"] == BerrarRating(-0.1 + 0.3 * (3 - ea), 0.3 + 0.4 * (1 - eh))


def test_defence_as_strength_flips_sign():
    c = cfg(omega=(0.1, 0.2, 0.1, 0.1), defence_is_strength=True)
    new = berrar_update(BerrarState(), match("a", "b", 2, 0), c)
    assert new.ratings["a"].defence == pytest.approx(0.2 * 2)


# kept inside the range where float64 has not saturated the logistic
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0.01, 3), st.floats(-3, 3))
def test_expectation_strictly_inside_bounds(o, d, beta, gamma):
    c = cfg(alpha_h=3.5, beta_h=beta, gamma_h=gamma)
    g = berrar_expect(BerrarState({"a": BerrarRating(o, 0), "b": BerrarRating(0, d)}), "a", "b", c)[0]
    assert 0 < g < 3.5


def test_invalid_config():
    with pytest.raises(ValueError):
        BerrarConfig(alpha_h=0)
    with pytest.raises(ValueError):
        BerrarConfig(omega=(0.1, 0.1, 0.1))


def test_tune_picks_lowest_cost():
    ds, _ = gen_league(SimLeague.log_spaced(6, seasons=2, seed=1))
    base = BerrarConfig(defence_is_strength=True)
    grid = [0.01, 0.05, 0.2]
    best, cost = berrar_tune(ds.matches, base, grid)
    from pitchrater.ratings import berrar_cost
    costs = {w: berrar_cost(ds.matches, BerrarConfig(omega=(w,) * 4, defence_is_strength=True))
             for w in grid}
    assert cost == min(costs.values())
    assert best.omega == (min(costs, key=costs.get),) * 4


def test_engine_covariate_matches_expectation():
    e = BerrarEngine()
    e.update(match("a", "b", 3, 0))
    gh, ga = e.expected_goals("a", "b")
    assert e.covariate("a", "b") == gh - ga
