import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blackwell_approx.approachability import saddle_value
from blackwell_approx.instances import build_negative_instance
from blackwell_approx.oco import OnlineGradientDescent
from blackwell_approx.oracles import ConstantOracle, ExactOracle, SloppyOracle
from blackwell_approx.saddle import (
    OGDWOF,
    aispox,
    aispoy,
    aispoyx,
    fw_infeasible_projection,
    fw_iteration_bound,
    ogdwof_run,
)
from blackwell_approx.sets import Box, ConvergenceError, ShiftedScaledView, Simplex, Singleton, VPolytope

SQRT2 = np.sqrt(2.0)


# --- Frank-Wolfe infeasible projection ----------------------------------------


def test_fw_hand_trace():
    o = ConstantOracle(Singleton([1, 1]), 2.0, [1, 1])
    out = fw_infeasible_projection([2, 2], 1e-6, o)
    assert np.allclose(out.x, [2, 2])
    assert np.array_equal(out.s, [1, 1])
    assert out.iterations == 2


def test_fw_eps_range():
    o = ExactOracle(Simplex(2))
    eps_max = 4 * 3**2 * 1.0
    with pytest.raises(ValueError):
        fw_infeasible_projection([0.5, 0.5], 0.0, o)
    with pytest.raises(ValueError):
        fw_infeasible_projection([0.5, 0.5], eps_max * 1.01, o)
    out = fw_infeasible_projection([5, 5], eps_max, ExactOracle(Singleton([1, 0])))
    assert out.iterations == 1


def test_fw_requires_minimizing_oracle():
    with pytest.raises(ValueError):
        fw_infeasible_projection([0.5], 0.1, SloppyOracle(Simplex(1), 0.5))


def test_fw_cap_reports_convergence_error(monkeypatch):
    import blackwell_approx.saddle as saddle

    monkeypatch.setattr(saddle, "fw_iteration_bound", lambda a, R, e: 0)
    with pytest.raises(ConvergenceError):
        saddle.fw_infeasible_projection([0.9, 0.1], 1e-9, ExactOracle(Simplex(2)))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30)
def test_fw_projection_guarantees(seed):
    rng = np.random.default_rng(seed)
    K = VPolytope(rng.uniform(0, 1, (4, 3)))
    alpha = float(rng.choice([1.0, 1.5, 2.0]))
    o = SloppyOracle(K, alpha) if alpha > 1 else ExactOracle(K)
    eps = float(rng.uniform(0.01, 0.2)) * K.radius**2
    y = rng.standard_normal(3) * 2 * K.radius
    out = fw_infeasible_projection(y, eps, o)
    assert out.iterations <= fw_iteration_bound(alpha, K.radius, eps)
    assert np.all(out.s <= out.x)
    assert K.contains(out.s)
    Z = alpha * K.vertices
    lhs = np.sum((Z - out.x) ** 2, axis=1)
    rhs = np.sum((Z - y) ** 2, axis=1) + 2 * eps
    assert np.all(lhs <= rhs + 1e-9)


# --- OGDWOF -------------------------------------------------------------------


def test_ogdwof_zero_costs():
    o = ExactOracle(Box([0, 0], [1, 1]))
    xs, ss = ogdwof_run(np.zeros((5, 2)), 0.1, 0.01, o)
    assert np.allclose(xs, xs[0]) and np.allclose(ss, ss[0])
    assert np.allclose(xs[0], o.alpha * ss[0])


def test_ogdwof_rejects_bad_steps():
    o = ExactOracle(Simplex(2))
    with pytest.raises(ValueError):
        OGDWOF(o, 0.0, 0.1)
    with pytest.raises(ValueError):
        OGDWOF(o, 0.1, -1.0)


def _regret_inequality(costs, mu, xi, oracle, comparators):
    xs, ss = ogdwof_run(costs, mu, xi, oracle)
    assert np.all(ss <= xs + 1e-15)
    N = len(costs)
    G2 = float(np.sum(costs**2))
    for z in comparators:
        lhs = float(np.sum((xs - z) * costs))
        rhs = np.sum((xs[0] - z) ** 2) / (2 * mu) + mu / 2 * G2 + xi * N / mu
        assert lhs <= rhs + 1e-9


def test_ogdwof_singleton_constant_cost():
    o = ConstantOracle(Singleton([0.5, 1.0]), 2.0, [0.5, 1.0])
    costs = np.tile([0.3, -0.7], (50, 1))
    _regret_inequality(costs, 0.05, 0.01, o, [2.0 * np.array([0.5, 1.0])])


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=20)
def test_ogdwof_regret_on_boxes(seed):
    rng = np.random.default_rng(seed)
    lo = rng.uniform(0, 0.5, 2)
    K = Box(lo, lo + rng.uniform(0.1, 0.5, 2))
    alpha = float(rng.choice([1.0, 2.0]))
    o = SloppyOracle(K, alpha) if alpha > 1 else ExactOracle(K)
    N = 60
    costs = rng.standard_normal((N, 2))
    G = np.linalg.norm(costs, axis=1).max()
    R = K.radius
    mu = SQRT2 * alpha * R / (G * np.sqrt(N))
    xi = SQRT2 * alpha**2 * R**2 / N
    _regret_inequality(costs, mu, xi, o, alpha * K.vertices)


# --- saddle oracles -------------------------------------------------------------


def test_singleton_games():
    X = Singleton([1.0])
    Y = Singleton([1.0])
    A = np.array([[1.0]])
    out = aispox(A, ExactOracle(X), 7, OnlineGradientDescent(Y, 0.1))
    assert np.allclose(out.x, [1]) and np.allclose(out.s, [1]) and out.calls_x == 7
    out = aispoy(A, ExactOracle(Y, maximize=True), 7, OnlineGradientDescent(X, 0.1))
    assert np.array_equal(out.x, out.s) and np.allclose(out.x, [1]) and out.calls_y == 7
    out = aispoyx(A, ExactOracle(X), ExactOracle(Y, maximize=True), 7, 0.1, 0.01)
    assert np.allclose(out.x, [1]) and np.allclose(out.s, [1])
    assert out.calls_y == 7


def test_oracle_direction_checks():
    X = Simplex(2)
    A = np.eye(2)
    with pytest.raises(ValueError):
        aispox(A, ExactOracle(X, maximize=True), 5, OnlineGradientDescent(X, 0.1))
    with pytest.raises(ValueError):
        aispoy(A, ExactOracle(X), 5, OnlineGradientDescent(X, 0.1))
    with pytest.raises(ValueError):
        aispox(A, ExactOracle(X), 0, OnlineGradientDescent(X, 0.1))


@pytest.mark.parametrize("alpha", [1.5, 2.0, 3.0])
def test_negative_instance_forces_alpha(alpha):
    inst, o = build_negative_instance(alpha)
    A = inst.loss.weighted([0.6, 0.8])
    out = aispox(A, o, 20, OnlineGradientDescent(inst.Y, 0.1))
    assert out.x[0] == pytest.approx(alpha) and out.s[0] == pytest.approx(alpha)


def _random_game(rng, n):
    A = rng.uniform(0, 1, (n, n))
    return A, Simplex(n), Simplex(n)


def test_aispox_accuracy(rng):
    A, X, Y = _random_game(rng, 2)
    N = 4000
    G = np.linalg.norm(A, 2) * X.radius
    oco = OnlineGradientDescent(Y, Y.diameter / (G * np.sqrt(N)))
    out = aispox(A, ExactOracle(X), N, oco)
    val, _ = saddle_value(A, X, Y)
    assert Y.support(A.T @ out.x)[0] <= val + 1.5 * Y.diameter * G / np.sqrt(N) + 1e-9
    assert out.regret <= 1.5 * G * Y.diameter * np.sqrt(N) + 1e-9


def test_aispoy_accuracy(rng):
    A, X, Y = _random_game(rng, 3)
    N = 4000
    G_X = 2.5 * np.linalg.norm(A, 2) * Y.radius
    oco = OnlineGradientDescent(X, X.diameter / (G_X * np.sqrt(N)))
    oy = SloppyOracle(Y, 0.5)
    out = aispoy(A, oy, N, oco)
    assert np.array_equal(out.x, out.s)
    assert out.calls_y == N
    # value against the shifted and scaled adversary set
    val, _ = saddle_value(A, X, ShiftedScaledView(Y, 2.0, Y.radius))
    achieved = Y.support(A.T @ out.x)[0]
    assert achieved <= val + 1.5 * X.diameter * G_X / (0.5 * np.sqrt(N)) + 1e-9


def test_aispoyx_accuracy_and_accounting(rng):
    A, X, Y = _random_game(rng, 2)
    N = 2000
    ox, oy = ExactOracle(X), ExactOracle(Y, maximize=True)
    G = 3 * np.linalg.norm(A, 2) * Y.radius
    R = X.radius
    mu = SQRT2 * R / (G * np.sqrt(N))
    xi = SQRT2 * R**2 / N
    out = aispoyx(A, ox, oy, N, mu, xi)
    assert out.calls_y == N
    assert out.calls_x == 1 + out.fw_iterations
    assert out.fw_iterations <= N * fw_iteration_bound(1.0, R, xi)
    assert np.all(out.s <= out.x + 1e-15)
    val, _ = saddle_value(A, X, ShiftedScaledView(Y, 1.0, Y.radius))
    achieved = Y.support(A.T @ out.x)[0]
    assert achieved <= val + (SQRT2 + 1) * R * G / np.sqrt(N) + 1e-9
