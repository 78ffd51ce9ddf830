"""Approximation oracles over nonnegative sets and the extended oracle built on them.

An oracle with ratio ``alpha >= 1`` (minimizing) returns, for a cost ``c >= 0``,
a point whose cost is at most ``alpha`` times the minimum; with ``alpha <= 1``
(maximizing) the value is at least ``alpha`` times the maximum.
"""
from __future__ import annotations

import itertools
import threading
from typing import NamedTuple

import numpy as np

from .bilinear import as_vector
from .sets import ConvexSet, MEMBERSHIP_TOL, UnsupportedOperation


class OracleContractError(ValueError):
    """An oracle was called outside its contract (e.g. a negative cost)."""


class ApproxOracle:
    """Base class: validates inputs, counts calls and delegates to :meth:`_solve`.

    Parameters
    ----------
    domain : ConvexSet
        The nonnegative set the oracle optimizes over.
    alpha : float
        Approximation ratio.
    maximize : bool, optional
        Optimization sense.  Defaults to ``alpha < 1``; at ``alpha == 1`` either
        sense is allowed, which is what an exact adversary-side oracle needs.
    """

    def __init__(self, domain, alpha, maximize=None):
        if not domain.nonneg:
            raise ValueError("approximation oracles require a nonnegative set")
        if not alpha > 0:
            raise ValueError("ratio must be positive")
        if maximize is None:
            maximize = alpha < 1
        if maximize and alpha > 1:
            raise ValueError("a maximizing oracle needs ratio <= 1")
        if not maximize and alpha < 1:
            raise ValueError("a minimizing oracle needs ratio >= 1")
        self.domain = domain
        self.alpha = float(alpha)
        self.maximize = bool(maximize)
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def calls(self):
        return self._calls

    def reset_calls(self):
        with self._lock:
            self._calls = 0

    def __call__(self, c):
        c = as_vector(c, self.domain.dim, "cost")
        if np.any(c < 0):
            raise OracleContractError("approximation oracles accept nonnegative costs only")
        with self._lock:
            self._calls += 1
        return self._solve(c)

    def _solve(self, c):
        raise NotImplementedError

    def __repr__(self):
        sense = "max" if self.maximize else "min"
        return f"{type(self).__name__}(alpha={self.alpha}, {sense}, dim={self.domain.dim})"


class ExactOracle(ApproxOracle):
    """Ratio-1 oracle wrapping the set's linear optimization oracle."""

    def __init__(self, domain, maximize=False):
        super().__init__(domain, 1.0, maximize)

    def _solve(self, c):
        return self.domain.support(c if self.maximize else -c)[1]


class SloppyOracle(ApproxOracle):
    """Deliberately poor but valid oracle.

    Returns the point on the segment between the best and the worst support
    point whose value sits exactly at the ratio limit (or the worst point if
    that is already within the ratio).
    """

    def _solve(self, c):
        best = self.domain.support(c if self.maximize else -c)[1]
        worst = self.domain.support(-c if self.maximize else c)[1]
        vb, vw = float(best @ c), float(worst @ c)
        gap = abs(vw - vb)
        if gap == 0.0:
            return best
        slack = (1.0 - self.alpha) * vb if self.maximize else (self.alpha - 1.0) * vb
        lam = min(1.0, slack / gap)
        return (1.0 - lam) * best + lam * worst


class ConstantOracle(ApproxOracle):
    """Ignores the cost and always returns the same point of the domain."""

    def __init__(self, domain, alpha, point, maximize=None):
        super().__init__(domain, alpha, maximize)
        self.point = as_vector(point, domain.dim).copy()
        if not domain.contains(self.point):
            raise ValueError("constant oracle point must lie in the domain")

    def _solve(self, c):
        return self.point.copy()


class ExtendedOutput(NamedTuple):
    v: np.ndarray
    s: np.ndarray


def _unit(q):
    nq = np.linalg.norm(q)
    return q / nq if nq > 0 else np.zeros_like(q)


def extended_call(oracle, c):
    """Extended approximation oracle.

    Splits ``c = c_plus + c_minus``.  A minimizing oracle returns
    ``(O(c_plus) - alpha R unit(c_minus), O(c_plus))`` so that ``s <= v``; a
    maximizing oracle returns ``(O(-c_minus) - R unit(c_plus), O(-c_minus))``
    so that ``v <= s``.  In both cases ``<v, c> <= min_{x in alpha K} <x, c>``
    and ``|v| <= (alpha + 2) R``.
    """
    c = as_vector(c, oracle.domain.dim, "cost")
    R = oracle.domain.radius
    cplus = np.maximum(c, 0.0)
    cminus = np.minimum(c, 0.0)
    if oracle.maximize:
        s = oracle(-cminus)
        v = s - R * _unit(cplus)
    else:
        s = oracle(cplus)
        v = s - oracle.alpha * R * _unit(cminus)
    return ExtendedOutput(v, s)


# --- vertex cover -----------------------------------------------------------


def local_ratio_cover(n, edges, weights):
    """Bar-Yehuda--Even local-ratio 2-approximation for weighted vertex cover.

    Scans the edges; for an uncovered edge the smaller residual weight is
    subtracted from both endpoints and endpoints reaching zero join the cover.
    """
    res = [float(v) for v in weights]
    if len(res) != n:
        raise ValueError(f"expected {n} weights, got {len(res)}")
    if any(v < 0 for v in res):
        raise ValueError("vertex weights must be nonnegative")
    edges = _check_graph(n, edges)
    cover = [False] * n
    for u, v in edges:
        if cover[u] or cover[v]:
            continue
        delta = min(res[u], res[v])
        res[u] -= delta
        res[v] -= delta
        if res[u] <= 0.0:
            cover[u] = True
        if res[v] <= 0.0:
            cover[v] = True
    return np.array(cover, dtype=float)


def vertex_cover_oracle(edges, weights, n=None):
    weights = as_vector(weights, name="weights")
    n = weights.shape[0] if n is None else n
    return local_ratio_cover(n, edges, weights)


def is_vertex_cover(edges, x):
    return all(x[u] > 0.5 or x[v] > 0.5 for u, v in edges)


def brute_force_min_cover(n, edges, weights):
    """Exhaustive minimum-weight vertex cover; returns (indicator, weight)."""
    weights = np.asarray(weights, dtype=float)
    best, best_w = None, np.inf
    for bits in itertools.product((0.0, 1.0), repeat=n):
        x = np.array(bits)
        if is_vertex_cover(edges, x):
            w = float(x @ weights)
            if w < best_w:
                best, best_w = x, w
    return best, best_w


def _check_graph(n, edges):
    clean = []
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
        if u == v:
            raise ValueError("self-loops are not allowed")
        clean.append((u, v))
    if len({frozenset(e) for e in clean}) != len(clean):
        raise ValueError("duplicate edges are not allowed")
    return clean


class CoverPolytope(ConvexSet):
    """Convex hull of the vertex-cover indicator vectors of a graph.

    Never materialized: membership is checked against the edge relaxation
    ``0 <= x <= 1, x_u + x_v >= 1``, and exact linear optimization is only
    available by enumeration for small graphs.
    """

    max_enumeration = 16

    def __init__(self, n, edges):
        self.dim = int(n)
        self.edges = _check_graph(self.dim, edges)
        self.nonneg = True
        self.radius = float(np.sqrt(self.dim))
        self.diameter = float(np.sqrt(self.dim))
        self._covers = None

    def _all_covers(self):
        if self.dim > self.max_enumeration:
            raise UnsupportedOperation("cover enumeration is limited to small graphs")
        if self._covers is None:
            pts = [np.array(b) for b in itertools.product((0.0, 1.0), repeat=self.dim)]
            self._covers = np.array([x for x in pts if is_vertex_cover(self.edges, x)])
        return self._covers

    def support(self, w):
        w = self._vec(w, "w")
        covers = self._all_covers()
        vals = covers @ w
        i = int(np.argmax(vals))
        return float(vals[i]), covers[i].copy()

    def contains(self, p, tol=MEMBERSHIP_TOL):
        p = self._vec(p)
        if np.any(p < -tol) or np.any(p > 1 + tol):
            return False
        return all(p[u] + p[v] >= 1 - tol for u, v in self.edges)

    @property
    def vertices(self):
        return self._all_covers().copy()


class VertexCoverOracle(ApproxOracle):
    """Local-ratio 2-approximation over the cover polytope of a graph."""

    def __init__(self, n, edges):
        super().__init__(CoverPolytope(n, edges), 2.0, maximize=False)
        self.edges = self.domain.edges

    def _solve(self, c):
        return local_ratio_cover(self.domain.dim, self.edges, c)


def read_edge_list(path):
    """Read a graph from a text file with one ``u v`` pair per line."""
    edges = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            u, v = line.split()[:2]
            edges.append((int(u), int(v)))
    return edges
