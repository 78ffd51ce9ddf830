"""Approximate infeasible saddle-point oracles for ``min_x max_y x^T A y``.

Three variants, depending on which action set is only reachable through an
approximation oracle: the player's (:func:`aispox`), the adversary's
(:func:`aispoy`) or both (:func:`aispoyx`).  Each returns a possibly
infeasible point ``x`` together with a feasible point ``s <= x``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .oco import OnlineGradientDescent, RegretLedger
from .oracles import extended_call
from .sets import ConvergenceError, UnsupportedOperation


@dataclass
class SaddleOutput:
    """Result of one saddle-point oracle invocation.

    Attributes
    ----------
    x, s : ndarray
        Averaged (possibly infeasible) point and the feasible point below it.
    n_iter : int
        Inner iterations ``N``.
    regret : float or None
        Realized regret of the inner online learner, when its comparator set
        supports exact linear optimization.
    calls_x, calls_y : int
        Approximation-oracle calls made during this invocation.
    """

    x: np.ndarray
    s: np.ndarray
    n_iter: int
    regret: float | None = None
    calls_x: int = 0
    calls_y: int = 0
    fw_iterations: int = 0


@dataclass
class FwProjectionOutput:
    x: np.ndarray
    s: np.ndarray
    iterations: int


def _calls(oracle):
    return 0 if oracle is None else oracle.calls


def _safe_regret(ledger, domain, scale=1.0):
    try:
        return ledger.regret(domain, scale)
    except UnsupportedOperation:
        return None


def aispox(A, oracle_x, N, oco_y):
    """Saddle oracle with an approximation oracle for the player's set.

    ``oco_y`` is an :class:`OnlineGradientDescent` over the adversary's set; it
    maximizes ``x_i^T A y`` while the extended oracle answers each ``A y_i``.
    """
    A = np.asarray(A, dtype=float)
    if N < 1:
        raise ValueError("N must be at least 1")
    if oracle_x.maximize:
        raise ValueError("the player's oracle must be minimizing")
    start = oracle_x.calls
    ledger = RegretLedger()
    xs = np.zeros(A.shape[0])
    ss = np.zeros(A.shape[0])
    for _ in range(N):
        y = oco_y.point
        v, s = extended_call(oracle_x, A @ y)
        xs += v
        ss += s
        g = -(A.T @ v)
        ledger.record(y, g)
        oco_y.update(g)
    return SaddleOutput(
        x=xs / N, s=ss / N, n_iter=N,
        regret=_safe_regret(ledger, oco_y.domain),
        calls_x=oracle_x.calls - start,
    )


def aispoy(A, oracle_y, N, oco_x):
    """Saddle oracle with an approximation oracle for the adversary's set.

    ``oco_x`` minimizes ``x^T A y_i`` over the player's set while the extended
    oracle answers ``-A^T x_i``.  Returns ``(x_bar, x_bar)``.
    """
    A = np.asarray(A, dtype=float)
    if N < 1:
        raise ValueError("N must be at least 1")
    if not oracle_y.maximize:
        raise ValueError("the adversary's oracle must be maximizing")
    start = oracle_y.calls
    ledger = RegretLedger()
    xs = np.zeros(A.shape[0])
    for _ in range(N):
        x = oco_x.point
        xs += x
        v, _s = extended_call(oracle_y, -(A.T @ x))
        g = A @ v
        ledger.record(x, g)
        oco_x.update(g)
    xbar = xs / N
    return SaddleOutput(
        x=xbar, s=xbar.copy(), n_iter=N,
        regret=_safe_regret(ledger, oco_x.domain),
        calls_y=oracle_y.calls - start,
    )


def fw_iteration_bound(alpha, R, eps):
    """Upper bound ``1 + 2(1+alpha^2) R^2 * 4 (alpha+2)^2 R^2 / eps^2`` on the iterations."""
    return int(np.ceil(1.0 + 2.0 * (1.0 + alpha**2) * R**2 * 4.0 * (alpha + 2.0) ** 2 * R**2 / eps**2))


def fw_infeasible_projection(y, eps, oracle, start=None):
    """Infeasible projection of ``y`` onto ``alpha X`` by Frank-Wolfe on the extended oracle.

    Parameters
    ----------
    y : array_like
        Point to project.
    eps : float
        Accuracy, in ``(0, 4 (alpha+2)^2 R^2]``.
    oracle : ApproxOracle
        Minimizing oracle for ``X``.
    start : tuple of ndarray, optional
        Starting pair ``(x_1, s_1)`` with ``s_1`` in ``X`` and ``s_1 <= x_1``.
        By default one oracle call at the zero cost supplies ``x_1 = s_1``.

    Returns
    -------
    FwProjectionOutput
        ``x`` satisfies ``|z - x|^2 <= |z - y|^2 + 2 eps`` for every ``z`` in
        ``alpha X``; ``s`` lies in ``X`` with ``s <= x``.
    """
    y = np.asarray(y, dtype=float)
    alpha, R = oracle.alpha, oracle.domain.radius
    if oracle.maximize:
        raise ValueError("infeasible projection needs a minimizing oracle")
    eps_max = 4.0 * (alpha + 2.0) ** 2 * R**2
    if not 0.0 < eps <= eps_max:
        raise ValueError(f"eps must lie in (0, {eps_max}], got {eps}")
    ny = np.linalg.norm(y)
    yt = y if ny <= alpha * R else (alpha * R / ny) * y
    if start is None:
        x = oracle(np.zeros_like(y))
        s = x.copy()
    else:
        x = np.array(start[0], dtype=float)
        s = np.array(start[1], dtype=float)
    hard_cap = 2 * fw_iteration_bound(alpha, R, eps)
    for t in range(1, hard_cap + 1):
        grad = x - yt
        v, st = extended_call(oracle, grad)
        d = x - v
        gap = float(grad @ d)
        if gap <= eps:
            return FwProjectionOutput(x, s, t)
        dd = float(d @ d)
        lam = min(1.0, gap / dd) if dd > 0 else 1.0
        # same algebraic form for both so rounding keeps s <= x
        x = (1.0 - lam) * x + lam * v
        s = (1.0 - lam) * s + lam * st
    raise ConvergenceError(f"Frank-Wolfe projection exceeded {hard_cap} iterations", best=x)


class OGDWOF:
    """Online gradient descent whose projection is an infeasible Frank-Wolfe projection onto ``alpha X``.

    Each projection starts from the previous pair ``(x, s)`` when that point is
    close enough to the new target for the iteration bound to apply, and from
    the feasible ``(s, s)`` otherwise.
    """

    def __init__(self, oracle, mu, xi, warm_start=True):
        if not mu > 0 or not xi > 0:
            raise ValueError("mu and xi must be positive")
        self.oracle = oracle
        self.mu = float(mu)
        self.xi = float(xi)
        self.warm_start = warm_start
        s1 = oracle(np.zeros(oracle.domain.dim))
        self.s = s1
        self.point = oracle.alpha * s1
        self.fw_iterations = 0

    def update(self, c):
        c = np.asarray(c, dtype=float)
        y = self.point - self.mu * c
        alpha, R = self.oracle.alpha, self.oracle.domain.radius
        start = (self.s, self.s)
        if self.warm_start:
            ny = np.linalg.norm(y)
            yt = y if ny <= alpha * R else (alpha * R / ny) * y
            if np.sum((self.point - yt) ** 2) <= 2.0 * (1.0 + alpha**2) * R**2:
                start = (self.point, self.s)
        out = fw_infeasible_projection(y, self.xi, self.oracle, start=start)
        self.fw_iterations += out.iterations
        self.point, self.s = out.x, out.s
        return self.point


def ogdwof_run(costs, mu, xi, oracle_x, warm_start=True):
    """Run OGDWOF on a fixed cost sequence; returns the x- and s-iterates (one per round)."""
    learner = OGDWOF(oracle_x, mu, xi, warm_start)
    xs, ss = [], []
    for c in costs:
        xs.append(learner.point.copy())
        ss.append(learner.s.copy())
        learner.update(c)
    n = oracle_x.domain.dim
    return np.array(xs).reshape(-1, n), np.array(ss).reshape(-1, n)


def aispoyx(A, oracle_x, oracle_y, N, mu, xi, warm_start=True):
    """Saddle oracle with approximation oracles for both sets.

    Runs the adversary-side loop of :func:`aispoy` with :class:`OGDWOF` as the
    player's learner and returns the means of its ``x`` and ``s`` iterates.
    """
    A = np.asarray(A, dtype=float)
    if N < 1:
        raise ValueError("N must be at least 1")
    if not oracle_y.maximize:
        raise ValueError("the adversary's oracle must be maximizing")
    cx0, cy0 = oracle_x.calls, oracle_y.calls
    learner = OGDWOF(oracle_x, mu, xi, warm_start)
    ledger = RegretLedger()
    xs = np.zeros(A.shape[0])
    ss = np.zeros(A.shape[0])
    for _ in range(N):
        x = learner.point
        xs += x
        ss += learner.s
        v, _s = extended_call(oracle_y, -(A.T @ x))
        g = A @ v
        ledger.record(x, g)
        learner.update(g)
    return SaddleOutput(
        x=xs / N, s=ss / N, n_iter=N,
        regret=_safe_regret(ledger, oracle_x.domain, oracle_x.alpha),
        calls_x=oracle_x.calls - cx0, calls_y=oracle_y.calls - cy0,
        fw_iterations=learner.fw_iterations,
    )
