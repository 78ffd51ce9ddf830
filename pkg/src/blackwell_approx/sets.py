"""Convex compact sets exposed through linear-optimization and projection oracles.

Every set supports ``support(w) -> (value, argmax)`` and most support
``project(p)``.  Distances to a set, to a scaled and shifted view
``c * (K - B_+(r))`` of it, and to the downward closure of such a view are
computed here as well.
"""
from __future__ import annotations

import itertools

import numpy as np

from .bilinear import DimensionError, as_vector

MEMBERSHIP_TOL = 1e-8


class UnsupportedOperation(NotImplementedError):
    """The set representation does not provide the requested capability."""


class ConvergenceError(RuntimeError):
    """An iterative solver stopped before its accuracy certificate held."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ConvexSet:
    """Base class for convex compact sets.

    Subclasses set ``dim``, ``nonneg``, ``radius`` and ``diameter`` and
    implement :meth:`support`; :meth:`project` is optional.
    """

    dim: int
    nonneg: bool = False
    radius: float
    diameter: float

    def support(self, w):
        raise NotImplementedError

    def project(self, p):
        raise UnsupportedOperation(f"{type(self).__name__} has no projection oracle")

    @property
    def vertices(self):
        """Finite generating point list, or None if not available."""
        return None

    def contains(self, p, tol=MEMBERSHIP_TOL):
        p = as_vector(p, self.dim)
        if self.nonneg and np.any(p < -tol):
            return False
        return bool(np.linalg.norm(p - self.project(p)) <= tol * max(1.0, self.radius))

    def _vec(self, p, name="point"):
        return as_vector(p, self.dim, name)


class Box(ConvexSet):
    """Axis-aligned box ``[lo, hi]``."""

    def __init__(self, lo, hi):
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        lo, hi = np.broadcast_arrays(lo, hi)
        if np.any(lo > hi):
            raise ValueError("box requires lo <= hi")
        self.lo, self.hi = lo.copy(), hi.copy()
        self.dim = lo.shape[0]
        self.nonneg = bool(np.all(lo >= 0))
        self.radius = float(np.linalg.norm(np.maximum(np.abs(lo), np.abs(hi))))
        self.diameter = float(np.linalg.norm(hi - lo))

    def support(self, w):
        w = self._vec(w, "w")
        pt = np.where(w > 0, self.hi, self.lo)
        return float(w @ pt), pt

    def project(self, p):
        return np.clip(self._vec(p), self.lo, self.hi)

    def contains(self, p, tol=MEMBERSHIP_TOL):
        p = self._vec(p)
        return bool(np.all(p >= self.lo - tol) and np.all(p <= self.hi + tol))

    @property
    def vertices(self):
        free = np.flatnonzero(self.hi > self.lo)
        if free.size > 16:
            return None
        corners = []
        for bits in itertools.product((0, 1), repeat=free.size):
            pt = self.lo.copy()
            pt[free] = np.where(np.array(bits, dtype=bool), self.hi[free], self.lo[free])
            corners.append(pt)
        return np.array(corners)

    def __repr__(self):
        return f"Box(lo={self.lo.tolist()}, hi={self.hi.tolist()})"


class Simplex(ConvexSet):
    """``{x >= 0 : sum(x) = total}``; the probability simplex when total is 1."""

    def __init__(self, dim, total=1.0):
        if dim < 1 or total <= 0:
            raise ValueError("simplex needs dim >= 1 and total > 0")
        self.dim = int(dim)
        self.total = float(total)
        self.nonneg = True
        self.radius = self.total
        self.diameter = self.total * np.sqrt(2.0) if self.dim > 1 else 0.0

    def support(self, w):
        w = self._vec(w, "w")
        i = int(np.argmax(w))
        pt = np.zeros(self.dim)
        pt[i] = self.total
        return float(self.total * w[i]), pt

    def project(self, p):
        # sort-based projection (Held, Wolfe, Crowder)
        p = self._vec(p)
        u = np.sort(p)[::-1]
        css = np.cumsum(u) - self.total
        k = np.arange(1, self.dim + 1)
        rho = np.flatnonzero(u - css / k > 0)[-1]
        theta = css[rho] / (rho + 1.0)
        return np.maximum(p - theta, 0.0)

    def contains(self, p, tol=MEMBERSHIP_TOL):
        p = self._vec(p)
        return bool(np.all(p >= -tol) and abs(p.sum() - self.total) <= tol * max(1.0, self.total))

    @property
    def vertices(self):
        return self.total * np.eye(self.dim)

    def __repr__(self):
        return f"Simplex(dim={self.dim}, total={self.total})"


class NonnegBall(ConvexSet):
    """``B_+(R)``: the Euclidean ball of radius R restricted to the nonnegative orthant."""

    def __init__(self, dim, radius=1.0):
        if radius < 0:
            raise ValueError("radius must be nonnegative")
        self.dim = int(dim)
        self.R = float(radius)
        self.nonneg = True
        self.radius = self.R
        self.diameter = self.R * (np.sqrt(2.0) if self.dim > 1 else 1.0)

    def support(self, w):
        w = self._vec(w, "w")
        wp = np.maximum(w, 0.0)
        nw = np.linalg.norm(wp)
        if nw == 0.0:
            return 0.0, np.zeros(self.dim)
        return float(self.R * nw), self.R * wp / nw

    def project(self, p):
        q = np.maximum(self._vec(p), 0.0)
        nq = np.linalg.norm(q)
        return q if nq <= self.R else q * (self.R / nq)

    def contains(self, p, tol=MEMBERSHIP_TOL):
        p = self._vec(p)
        return bool(np.all(p >= -tol) and np.linalg.norm(p) <= self.R + tol)

    def __repr__(self):
        return f"NonnegBall(dim={self.dim}, radius={self.R})"


class Ball(ConvexSet):
    """Origin-centred Euclidean ball."""

    def __init__(self, dim, radius=1.0):
        self.dim = int(dim)
        self.R = float(radius)
        self.radius = self.R
        self.diameter = 2.0 * self.R

    def support(self, w):
        w = self._vec(w, "w")
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, np.zeros(self.dim)
        return float(self.R * nw), self.R * w / nw

    def project(self, p):
        p = self._vec(p)
        n = np.linalg.norm(p)
        return p if n <= self.R else p * (self.R / n)

    def contains(self, p, tol=MEMBERSHIP_TOL):
        return bool(np.linalg.norm(self._vec(p)) <= self.R + tol)


class Singleton(ConvexSet):
    def __init__(self, point):
        self.point = as_vector(point).copy()
        self.dim = self.point.shape[0]
        self.nonneg = bool(np.all(self.point >= 0))
        self.radius = float(np.linalg.norm(self.point))
        self.diameter = 0.0

    def support(self, w):
        w = self._vec(w, "w")
        return float(w @ self.point), self.point.copy()

    def project(self, p):
        self._vec(p)
        return self.point.copy()

    def contains(self, p, tol=MEMBERSHIP_TOL):
        return bool(np.linalg.norm(self._vec(p) - self.point) <= tol)

    @property
    def vertices(self):
        return self.point[None, :].copy()

    def __repr__(self):
        return f"Singleton({self.point.tolist()})"


class VPolytope(ConvexSet):
    """Convex hull of a finite list of points (rows of ``points``)."""

    def __init__(self, points):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise DimensionError("points must be a non-empty (k, dim) array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        self.points = pts
        self.dim = pts.shape[1]
        self.nonneg = bool(np.all(pts >= 0))
        self.radius = float(np.max(np.linalg.norm(pts, axis=1)))
        diffs = pts[:, None, :] - pts[None, :, :]
        self.diameter = float(np.sqrt(np.max(np.sum(diffs * diffs, axis=-1))))

    def support(self, w):
        w = self._vec(w, "w")
        vals = self.points @ w
        i = int(np.argmax(vals))
        return float(vals[i]), self.points[i].copy()

    def project(self, p):
        p = self._vec(p)
        lam = min_norm_point(self.points - p)
        return lam @ self.points

    @property
    def vertices(self):
        return self.points.copy()

    def __repr__(self):
        return f"VPolytope({self.points.shape[0]} points in R^{self.dim})"


def min_norm_point(P, tol=1e-12, max_iter=1000):
    """Barycentric weights of the minimum-norm point of ``conv(rows of P)``.

    Wolfe's algorithm: maintain a corral of affinely independent points,
    alternate between adding the most improving point and moving to the
    affine minimizer of the corral, dropping points whose weight vanishes.
    """
    P = np.asarray(P, dtype=float)
    k = P.shape[0]
    scale = max(1.0, float(np.max(np.sum(P * P, axis=1))))
    corral = [int(np.argmin(np.sum(P * P, axis=1)))]
    lam = np.array([1.0])
    x = P[corral[0]].copy()
    for _ in range(max_iter):
        dots = P @ x
        j = int(np.argmin(dots))
        if x @ x - dots[j] <= tol * scale or j in corral:
            break
        corral.append(j)
        lam = np.append(lam, 0.0)
        for _ in range(k + 1):
            Q = P[corral]
            r = len(corral)
            kkt = np.zeros((r + 1, r + 1))
            kkt[:r, :r] = Q @ Q.T
            kkt[:r, r] = 1.0
            kkt[r, :r] = 1.0
            rhs = np.zeros(r + 1)
            rhs[r] = 1.0
            mu = np.linalg.lstsq(kkt, rhs, rcond=None)[0][:r]
            if np.all(mu > tol):
                lam = mu
                break
            ratios = np.full(r, np.inf)
            for i in np.flatnonzero(mu <= tol):
                denom = lam[i] - mu[i]
                ratios[i] = lam[i] / denom if denom > 0 else 0.0
            theta = min(1.0, float(np.min(ratios)))
            lam = lam + theta * (mu - lam)
            keep = lam > tol
            if not np.any(keep):
                keep[int(np.argmax(lam))] = True
            corral = [c for c, kp in zip(corral, keep) if kp]
            lam = lam[keep] / lam[keep].sum()
        if j not in corral:
            break
        x = lam @ P[corral]
    x = lam @ P[corral]
    out = np.zeros(k)
    out[corral] = lam
    return out


class ShiftedScaledView(ConvexSet):
    """The set ``scale * (base - B_+(shift))``.

    Its support function is ``scale * (h_base(w) + shift * |w^-|)`` where
    ``w^-`` keeps only the negative coordinates of ``w``.
    """

    def __init__(self, base, scale=1.0, shift=0.0):
        if scale <= 0:
            raise ValueError("scale must be positive")
        if shift < 0:
            raise ValueError("shift radius must be nonnegative")
        self.base = base
        self.scale = float(scale)
        self.shift = float(shift)
        self.dim = base.dim
        self.nonneg = bool(base.nonneg and self.shift == 0.0)
        self.radius = self.scale * (base.radius + self.shift)
        self.diameter = self.scale * (base.diameter + self.shift * (np.sqrt(2.0) if self.dim > 1 else 1.0))

    def support(self, w):
        return support_shifted_scaled(self, w)

    def project(self, p):
        return _project_view(self, self._vec(p))[0]

    def contains(self, p, tol=MEMBERSHIP_TOL):
        return distance_to_set(p, self) <= tol * max(1.0, self.radius)

    @property
    def vertices(self):
        if self.shift > 0.0:
            return None
        v = self.base.vertices
        return None if v is None else self.scale * v

    def __repr__(self):
        return f"ShiftedScaledView({self.base!r}, scale={self.scale}, shift={self.shift})"


def support_point(K, w):
    """``(h_K(w), argmax_{k in K} <w, k>)``."""
    return K.support(w)


def support_shifted_scaled(view, w):
    """Support value and maximizer of ``scale * (base - B_+(shift))`` at ``w``."""
    w = as_vector(w, view.dim, "w")
    val, pt = view.base.support(w)
    wneg = np.minimum(w, 0.0)
    nneg = np.linalg.norm(wneg)
    if view.shift > 0.0 and nneg > 0.0:
        val += view.shift * nneg
        pt = pt + view.shift * wneg / nneg
    return view.scale * val, view.scale * pt


def euclidean_project(K, p):
    return K.project(p)


def distance_to_set(p, K):
    """Euclidean distance from ``p`` to ``K``."""
    if isinstance(K, ShiftedScaledView):
        return _project_view(K, as_vector(p, K.dim))[1]
    p = as_vector(p, K.dim)
    return float(np.linalg.norm(p - K.project(p)))


def dual_distance(p, K, w):
    """``<w, p> - h_K(w)``: a lower bound on ``d(p, K)`` for every unit ``w``."""
    return float(np.dot(w, p) - K.support(w)[0])


def _project_view(view, p, tol=1e-10, max_iter=20000):
    """Project onto ``scale * (base - B_+(shift))``; returns (point, distance).

    Without a shift the base projection is exact.  Otherwise accelerated
    projected gradient runs on the pair ``(s, u)`` and stops once the primal
    distance and the dual lower bound agree to ``tol``.
    """
    c = view.scale
    if view.shift == 0.0:
        q = c * view.base.project(p / c)
        return q, float(np.linalg.norm(p - q))
    target = p / c
    ball = NonnegBall(view.dim, view.shift)
    s = view.base.project(target)
    u = ball.project(s - target)
    s_prev, u_prev = s, u
    best = (np.inf, s - u)
    for k in range(1, max_iter + 1):
        beta = (k - 1.0) / (k + 2.0)
        sy = s + beta * (s - s_prev)
        uy = u + beta * (u - u_prev)
        r = target - sy + uy
        s_prev, u_prev = s, u
        s = view.base.project(sy + 0.5 * r)
        u = ball.project(uy - 0.5 * r)
        z = s - u
        res = target - z
        primal = float(np.linalg.norm(res))
        if primal < best[0]:
            best = (primal, z)
        if primal == 0.0:
            break
        if k % 10 == 0:
            wdir = res / primal
            lower = dual_distance(target, ShiftedScaledView(view.base, 1.0, view.shift), wdir)
            if best[0] - lower <= tol * max(1.0, best[0]):
                break
    return c * best[1], c * best[0]


def downward_closure_contains(p, K, tol=MEMBERSHIP_TOL):
    return distance_to_downward_closure(p, K) <= tol


def distance_to_downward_closure(p, view, iters=500, restarts=5, tol=1e-4):
    """Distance from ``p`` to the downward closure of ``view``.

    Uses ``d(p, (K)_down) = min_{s in K} |(p - s)_+|``.  Shifting by
    ``-B_+(r)`` does not change the downward closure, so only the scaled base
    set matters.  Boxes and singletons have closed forms; other bases are
    handled by projected gradient descent on ``|(p - c s)_+|^2`` from several
    support points.  A Frank-Wolfe gap certifies the answer; if the certified
    error exceeds ``tol`` a :class:`ConvergenceError` carries the best value.
    """
    if isinstance(view, ShiftedScaledView):
        base, c = view.base, view.scale
    else:
        base, c = view, 1.0
    p = as_vector(p, base.dim)
    if isinstance(base, Box):
        return float(np.linalg.norm(np.maximum(p - c * base.hi, 0.0)))
    if isinstance(base, Singleton):
        return float(np.linalg.norm(np.maximum(p - c * base.point, 0.0)))

    def obj(s):
        r = np.maximum(p - c * s, 0.0)
        return float(r @ r), r

    step = 1.0 / (2.0 * c * c)
    dirs = [np.ones(base.dim), p.copy()]
    dirs += [np.eye(base.dim)[i % base.dim] for i in range(restarts)]
    best_f, best_s = np.inf, None
    for direction in dirs[:restarts]:
        s = base.support(direction)[1]
        f, r = obj(s)
        for _ in range(iters):
            if f == 0.0:
                break
            # gradient of |(p - c s)_+|^2 is -2 c r; Lipschitz constant 2 c^2
            s = base.project(s + step * 2.0 * c * r)
            f, r = obj(s)
        if f < best_f:
            best_f, best_s = f, s
        if best_f == 0.0:
            return 0.0
    _, r = obj(best_s)
    neg_grad = 2.0 * c * r
    gap = base.support(neg_grad)[0] - float(neg_grad @ best_s)
    value = np.sqrt(best_f)
    lower = np.sqrt(max(0.0, best_f - max(gap, 0.0)))
    if value - lower > tol:
        raise ConvergenceError(
            f"downward-closure distance not certified: value {value:.6g}, lower bound {lower:.6g}",
            best=value,
        )
    return float(value)
