import numpy as np
import pytest
from hypothesis import given, strategies as st

from blackwell_approx.oco import (
    OcoState,
    OnlineGradientDescent,
    initial_point,
    ogd_regret_bound,
    ogd_step,
    run_ogd,
)
from blackwell_approx.sets import Ball, Box, Simplex, VPolytope


def test_ogd_step_examples():
    ball = Ball(2, 1.0)
    s = ogd_step(OcoState(ball, 0.5, np.zeros(2)), [1, 0])
    assert np.allclose(s.x, [-0.5, 0]) and s.t == 1
    s = ogd_step(OcoState(ball, 1.0, np.array([1.0, 0.0])), [-2, 0])
    assert np.allclose(s.x, [1, 0])
    s = ogd_step(OcoState(ball, 1.0, np.array([0.3, 0.1])), [0, 0])
    assert np.allclose(s.x, [0.3, 0.1])


def test_ogd_step_rejects_bad_input():
    ball = Ball(2, 1.0)
    with pytest.raises(ValueError):
        ogd_step(OcoState(ball, 1.0, np.zeros(2)), [np.nan, 0])
    with pytest.raises(ValueError):
        ogd_step(OcoState(ball, 1.0, np.zeros(2)), [1, 0, 0])
    with pytest.raises(ValueError):
        OcoState(ball, 0.0, np.zeros(2))


def test_regret_bound_examples():
    assert ogd_regret_bound(1, 2, 100) == pytest.approx(30)
    assert ogd_regret_bound(2, 3, 1) == pytest.approx(9)
    assert ogd_regret_bound(0, 3, 50) == 0


def test_zero_losses_zero_regret():
    it, ledger = run_ogd(Simplex(3), np.zeros((10, 3)), 0.1)
    assert ledger.regret(Simplex(3)) == 0
    assert np.allclose(it, it[0])


def test_iterates_match_repeated_steps(rng):
    K = Box([0, 0, 0], [1, 2, 1])
    gs = rng.standard_normal((15, 3))
    it, _ = run_ogd(K, gs, 0.3)
    state = OcoState(K, 0.3, initial_point(K))
    for t, g in enumerate(gs):
        assert np.array_equal(it[t], state.x)
        state = ogd_step(state, g)


def test_run_ogd_deterministic(rng):
    K = VPolytope(rng.uniform(0, 1, (5, 3)))
    gs = rng.standard_normal((20, 3))
    a, la = run_ogd(K, gs, 0.2)
    b, lb = run_ogd(K, gs, 0.2)
    assert np.array_equal(a, b) and la.losses == lb.losses


@given(st.integers(0, 2**32 - 1), st.integers(1, 200))
def test_regret_bound_on_boxes(seed, T):
    rng = np.random.default_rng(seed)
    lo = rng.uniform(0, 1, 3)
    K = Box(lo, lo + rng.uniform(0.1, 2, 3))
    gs = rng.standard_normal((T, 3))
    if rng.random() < 0.3:
        gs[:] = gs[0]  # constant linear loss
    G = np.linalg.norm(gs, axis=1).max()
    D = K.diameter
    it, ledger = run_ogd(K, gs, D / (G * np.sqrt(T)))
    assert all(K.contains(x) for x in it)
    # comparator by vertex enumeration
    best = min(float(gs.sum(0) @ v) for v in K.vertices)
    regret = ledger.cumulative_loss - best
    assert regret == pytest.approx(ledger.regret(K), abs=1e-9)
    assert regret <= ogd_regret_bound(G, D, T) + 1e-9


def test_learner_and_functional_forms_agree(rng):
    K = Ball(3, 2.0)
    learner = OnlineGradientDescent(K, 0.1)
    state = OcoState(K, 0.1, initial_point(K))
    for g in rng.standard_normal((10, 3)):
        learner.update(g)
        state = ogd_step(state, g)
    assert np.allclose(learner.point, state.x) and learner.t == state.t == 10
