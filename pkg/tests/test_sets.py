import numpy as np
import pytest
from hypothesis import given, strategies as st

from blackwell_approx.sets import (
    Ball,
    Box,
    ConvergenceError,
    NonnegBall,
    ShiftedScaledView,
    Simplex,
    Singleton,
    VPolytope,
    distance_to_downward_closure,
    distance_to_set,
    dual_distance,
    euclidean_project,
    min_norm_point,
    support_point,
    support_shifted_scaled,
)


def random_set(rng, dim=None):
    dim = dim or int(rng.integers(1, 5))
    kind = rng.integers(5)
    if kind == 0:
        lo = rng.uniform(0, 1, dim)
        return Box(lo, lo + rng.uniform(0, 2, dim))
    if kind == 1:
        return Simplex(dim, rng.uniform(0.5, 2))
    if kind == 2:
        return NonnegBall(dim, rng.uniform(0.5, 2))
    if kind == 3:
        return Singleton(rng.uniform(0, 2, dim))
    return VPolytope(rng.uniform(0, 2, (int(rng.integers(1, 7)), dim)))


def sample_points(K, rng, k=20):
    """Points of K: vertices when available, else random support points, plus convex mixes."""
    V = K.vertices
    if V is None:
        V = np.array([K.support(rng.standard_normal(K.dim))[1] for _ in range(8)])
    lam = rng.dirichlet(np.ones(len(V)), size=k)
    return np.vstack([V, lam @ V])


# --- operation examples --------------------------------------------------------


def test_support_examples():
    assert support_point(Singleton([1, 1]), [-1, 0])[0] == -1
    assert np.array_equal(support_point(Singleton([1, 1]), [-1, 0])[1], [1, 1])
    val, pt = support_point(Simplex(3), [0.2, 0.9, 0.1])
    assert val == pytest.approx(0.9) and np.array_equal(pt, [0, 1, 0])
    val, pt = support_point(Box([0, 0], [1, 1]), [1, -1])
    assert val == 1 and np.array_equal(pt, [1, 0])


def test_projection_examples():
    assert np.allclose(euclidean_project(Ball(2, 1.0), [3, 4]), [0.6, 0.8])
    assert np.allclose(euclidean_project(Box([0, 0], [1, 1]), [2, -1]), [1, 0])
    assert np.allclose(euclidean_project(Simplex(3), [0.5, 0.5, 0]), [0.5, 0.5, 0])


def test_distance_examples():
    assert distance_to_set([2, 2], Singleton([1, 1])) == pytest.approx(np.sqrt(2))
    assert distance_to_set([0.5, 0.5], Box([0, 0], [1, 1])) == 0
    assert distance_to_set([0, 3], Box([0, 0], [1, 1])) == pytest.approx(2)


def test_downward_closure_examples():
    S = Singleton([1, 1])
    view = ShiftedScaledView(S, 1.0, 0.0)
    assert distance_to_downward_closure([2, 2], view) == pytest.approx(np.sqrt(2))
    assert distance_to_downward_closure([0.5, 2], view) == pytest.approx(1)
    assert distance_to_downward_closure([0, 0], view) == 0


def test_support_shifted_scaled_examples():
    S = Singleton([1, 1])
    assert support_shifted_scaled(ShiftedScaledView(S, 2.0, 3.0), [-1, 0])[0] == pytest.approx(4)
    K = VPolytope([[0, 1], [2, 0.5]])
    w = np.array([0.3, 0.7])
    assert support_shifted_scaled(ShiftedScaledView(K, 1.7, 5.0), w)[0] == pytest.approx(1.7 * K.support(w)[0])
    assert support_shifted_scaled(ShiftedScaledView(K, 1.0, 0.0), [-1, 2])[0] == pytest.approx(K.support([-1, 2])[0])


def test_view_validation():
    with pytest.raises(ValueError):
        ShiftedScaledView(Singleton([1.0]), 0.0)
    with pytest.raises(ValueError):
        ShiftedScaledView(Singleton([1.0]), 1.0, -1.0)


def test_box_and_simplex_validation():
    with pytest.raises(ValueError):
        Box([1, 0], [0, 1])
    with pytest.raises(ValueError):
        Simplex(0)


# --- properties ----------------------------------------------------------------


@given(st.integers(0, 2**32 - 1))
def test_capabilities_return_members(seed):
    rng = np.random.default_rng(seed)
    K = random_set(rng)
    for _ in range(5):
        w = rng.standard_normal(K.dim)
        val, pt = K.support(w)
        assert K.contains(pt)
        assert val == pytest.approx(w @ pt)
        assert np.all(pt >= 0) or not K.nonneg
        q = K.project(3 * rng.standard_normal(K.dim))
        assert K.contains(q, tol=1e-7)
    assert K.diameter <= 2 * K.radius + 1e-12


@given(st.integers(0, 2**32 - 1))
def test_support_beats_every_member(seed):
    rng = np.random.default_rng(seed)
    K = random_set(rng)
    pts = sample_points(K, rng)
    for _ in range(5):
        w = rng.standard_normal(K.dim)
        assert np.all(pts @ w <= K.support(w)[0] + 1e-9)


@given(st.integers(0, 2**32 - 1))
def test_projection_variational_inequality(seed):
    rng = np.random.default_rng(seed)
    K = random_set(rng)
    pts = sample_points(K, rng)
    p = 3 * rng.standard_normal(K.dim)
    q = K.project(p)
    assert np.all((pts - q) @ (p - q) <= 1e-8)


@given(st.integers(0, 2**32 - 1))
def test_primal_dual_distance_agreement(seed):
    rng = np.random.default_rng(seed)
    K = random_set(rng)
    p = 3 * rng.standard_normal(K.dim)
    q = K.project(p)
    d = distance_to_set(p, K)
    if d > 1e-9:
        assert abs(d - dual_distance(p, K, (p - q) / d)) <= 1e-6
    for _ in range(5):
        w = rng.standard_normal(K.dim)
        w /= np.linalg.norm(w)
        assert dual_distance(p, K, w) <= d + 1e-9


@given(st.integers(0, 2**32 - 1))
def test_support_subadditive(seed):
    rng = np.random.default_rng(seed)
    K = random_set(rng)
    w1, w2 = rng.standard_normal((2, K.dim))
    assert K.support(w1 + w2)[0] <= K.support(w1)[0] + K.support(w2)[0] + 1e-9


@given(st.integers(0, 2**32 - 1))
def test_shifted_view_projection_matches_dual(seed):
    rng = np.random.default_rng(seed)
    K = random_set(rng)
    view = ShiftedScaledView(K, rng.uniform(0.3, 3), rng.uniform(0, 2))
    p = 4 * rng.standard_normal(K.dim)
    q = view.project(p)
    d = distance_to_set(p, view)
    assert np.linalg.norm(p - q) == pytest.approx(d, abs=1e-9)
    if d > 1e-6:
        assert d - dual_distance(p, view, (p - q) / d) <= 1e-6 * max(1.0, d)
    # the shifted view contains the scaled base and its shift-downward neighbours
    s = view.scale * K.support(rng.standard_normal(K.dim))[1]
    assert distance_to_set(s, view) <= 1e-6
    u = NonnegBall(K.dim, view.shift).project(rng.random(K.dim))
    assert distance_to_set(s - view.scale * u, view) <= 1e-6


@given(st.integers(0, 2**32 - 1))
def test_downward_closure_below_set_distance(seed):
    rng = np.random.default_rng(seed)
    K = random_set(rng)
    view = ShiftedScaledView(K, rng.uniform(0.5, 2), 0.0)
    for _ in range(3):
        p = 3 * rng.standard_normal(K.dim)
        assert distance_to_downward_closure(p, view) <= distance_to_set(p, view) + 1e-6


def test_downward_closure_ignores_shift(rng):
    K = VPolytope(rng.uniform(0, 1, (4, 3)))
    p = rng.uniform(0, 2, 3)
    a = distance_to_downward_closure(p, ShiftedScaledView(K, 1.5, 0.0))
    b = distance_to_downward_closure(p, ShiftedScaledView(K, 1.5, 4.0))
    assert a == pytest.approx(b)


def test_downward_closure_reports_uncertified(monkeypatch):
    K = VPolytope([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ConvergenceError) as err:
        distance_to_downward_closure([2.0, 2.0], K, iters=0, restarts=1, tol=0.0)
    assert err.value.best is not None


def test_min_norm_point_simple():
    lam = min_norm_point(np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert np.allclose(lam, [0.5, 0.5])
    lam = min_norm_point(np.array([[1.0, 1.0], [2.0, 3.0], [1.0, 2.0]]))
    assert np.allclose(lam, [1, 0, 0])
