"""Ready-made games and adversary strategies for simulations."""
from __future__ import annotations

import enum

import numpy as np

from .approachability import BlackwellInstance, ConfigurationError
from .bilinear import BilinearLoss, as_vector
from .oracles import (
    ConstantOracle,
    ExactOracle,
    SloppyOracle,
    VertexCoverOracle,
    local_ratio_cover,
)
from .sets import Box, Simplex, Singleton


class AdversaryKind(str, enum.Enum):
    FIXED_SEQUENCE = "fixed_sequence"
    RANDOM_VERTEX = "random_vertex"
    BEST_RESPONSE = "best_response"


class Adversary:
    """Chooses ``y_t`` after seeing the played action ``s_t`` (never ``x_t``)."""

    kind: AdversaryKind

    def start(self, instance, T, rng):
        self.instance = instance
        self.rng = rng

    def respond(self, t, s):
        raise NotImplementedError


class FixedSequenceAdversary(Adversary):
    """Plays a given sequence, cycling if the game is longer."""

    kind = AdversaryKind.FIXED_SEQUENCE

    def __init__(self, sequence):
        self.sequence = [as_vector(y, name="adversary action") for y in sequence]
        if not self.sequence:
            raise ValueError("sequence must not be empty")

    def respond(self, t, s):
        return self.sequence[t % len(self.sequence)]


class RandomVertexAdversary(Adversary):
    """Plays a uniformly random vertex of ``Y`` (or a random extreme point if no vertex list)."""

    kind = AdversaryKind.RANDOM_VERTEX

    def start(self, instance, T, rng):
        super().start(instance, T, rng)
        self._vertices = instance.Y.vertices

    def respond(self, t, s):
        if self._vertices is not None:
            return self._vertices[self.rng.integers(len(self._vertices))].copy()
        return self.instance.Y.support(self.rng.standard_normal(self.instance.Y.dim))[1]


class BestResponseAdversary(Adversary):
    """Maximizes ``<theta, l(s_t, y)>`` over ``Y`` for a fixed unit direction ``theta``.

    ``theta`` defaults to the normalized all-ones vector.
    """

    kind = AdversaryKind.BEST_RESPONSE

    def __init__(self, theta=None):
        self.theta = None if theta is None else as_vector(theta, name="theta")

    def start(self, instance, T, rng):
        super().start(instance, T, rng)
        d = instance.loss.d
        theta = np.ones(d) / np.sqrt(d) if self.theta is None else self.theta
        if theta.shape != (d,):
            raise ConfigurationError("theta dimension must match the loss dimension")
        self._A = instance.loss.weighted(theta / max(1.0, np.linalg.norm(theta)))

    def respond(self, t, s):
        return self.instance.Y.support(self._A.T @ s)[1]


def make_adversary(kind, params=None):
    params = dict(params or {})
    kind = AdversaryKind(kind)
    if kind is AdversaryKind.FIXED_SEQUENCE:
        return FixedSequenceAdversary(params["sequence"])
    if kind is AdversaryKind.RANDOM_VERTEX:
        return RandomVertexAdversary()
    return BestResponseAdversary(params.get("theta"))


# --- games ----------------------------------------------------------------------


def build_vertex_cover_game(n, edges, part1, part2, weight_bound, S=None):
    """Player picks a vertex cover, adversary picks vertex weights in ``[0, b]^n``.

    The loss is ``(sum_{j in V1} x_j y_j, sum_{j in V2} x_j y_j)``.  The player's
    set is only reachable through the local-ratio 2-approximation.  ``S``
    defaults to the box ``[0, b c*]^2`` with ``c*`` the unit-weight
    local-ratio cover size, which the greedy cover itself attains.

    Raises
    ------
    ConfigurationError
        If the graph has no edges or the two parts do not partition the vertices.
    """
    if not edges:
        raise ConfigurationError("the graph must have at least one edge")
    p1, p2 = set(part1), set(part2)
    if p1 & p2 or p1 | p2 != set(range(n)):
        raise ConfigurationError("part1 and part2 must partition the vertex set")
    if not weight_bound > 0:
        raise ConfigurationError("weight bound must be positive")
    oracle = VertexCoverOracle(n, edges)
    ind1 = np.array([1.0 if j in p1 else 0.0 for j in range(n)])
    ind2 = 1.0 - ind1
    loss = BilinearLoss([np.diag(ind1), np.diag(ind2)])
    Y = Box(np.zeros(n), np.full(n, float(weight_bound)))
    if S is None:
        c_star = float(local_ratio_cover(n, oracle.edges, np.ones(n)).sum())
        S = Box(np.zeros(2), np.full(2, weight_bound * c_star))
    inst = BlackwellInstance(oracle.domain, Y, loss, S, oracle_x=oracle)
    return inst, oracle


def build_negative_instance(alpha_x):
    """The game where a valid ``alpha``-oracle makes ``S = {(1, 1)}`` unreachable.

    ``X = {(z, 1) : z in [1, alpha]}``, ``Y = {1}``, ``l(x, y) = (x_1 y, x_2 y)``
    and the oracle always answers ``(alpha, 1)``.
    """
    if not alpha_x > 1:
        raise ConfigurationError("the negative example needs alpha_x > 1")
    X = Box([1.0, 1.0], [alpha_x, 1.0])
    Y = Singleton([1.0])
    loss = BilinearLoss([[[1.0], [0.0]], [[0.0], [1.0]]])
    S = Singleton([1.0, 1.0])
    oracle = ConstantOracle(X, alpha_x, [alpha_x, 1.0])
    return BlackwellInstance(X, Y, loss, S, oracle_x=oracle), oracle


def build_cyclic_game(d, scale=1.0, radius=1.0, alpha_x=1.0, alpha_y=1.0, sloppy=True):
    """Cyclic-permutation game over scaled simplices.

    ``L_i = scale * P^i`` with ``P`` the cyclic shift, both players on the
    simplex of total ``radius``.  Against the uniform strategy every loss
    coordinate equals ``scale * radius^2 / d``, so ``S = [0, scale r^2 / d]^d``
    is approachable.  Oracles with ratios different from one are
    :class:`SloppyOracle` instances when ``sloppy`` is set.
    """
    P = np.roll(np.eye(d), 1, axis=1)
    mats = np.array([scale * np.linalg.matrix_power(P, i) for i in range(d)])
    loss = BilinearLoss(mats)
    X = Simplex(d, radius)
    Y = Simplex(d, radius)
    S = Box(np.zeros(d), np.full(d, scale * radius**2 / d))
    ox = SloppyOracle(X, alpha_x, maximize=False) if (sloppy and alpha_x != 1) else ExactOracle(X)
    oy = SloppyOracle(Y, alpha_y, maximize=True) if (sloppy and alpha_y != 1) else ExactOracle(Y, maximize=True)
    return BlackwellInstance(X, Y, loss, S, oracle_x=ox, oracle_y=oy)
