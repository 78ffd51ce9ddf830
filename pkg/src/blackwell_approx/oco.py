"""Online gradient descent over a convex set with a projection oracle."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .bilinear import as_vector


def initial_point(domain):
    """Deterministic starting point: the support point of ``domain`` in direction e_1."""
    e1 = np.zeros(domain.dim)
    e1[0] = 1.0
    return domain.support(e1)[1]


@dataclass(frozen=True)
class OcoState:
    domain: object
    eta: float
    x: np.ndarray
    t: int = 0

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("step size must be positive")


def ogd_step(state, subgradient):
    """One projected step ``x <- Pi_K(x - eta * g)``."""
    g = as_vector(subgradient, state.domain.dim, "subgradient")
    x = state.domain.project(state.x - state.eta * g)
    return replace(state, x=x, t=state.t + 1)


def ogd_regret_bound(G, D, T):
    """``1.5 * G * D * sqrt(T)``, valid when the step is ``D / (G sqrt(T))``."""
    return 1.5 * G * D * np.sqrt(T)


@dataclass
class RegretLedger:
    """Per-round record of an online learner facing linear losses ``<g_t, x>``."""

    losses: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    grad_sum: np.ndarray | None = None

    def record(self, x, g):
        self.losses.append(float(g @ x))
        self.grad_norms.append(float(np.linalg.norm(g)))
        self.grad_sum = g.copy() if self.grad_sum is None else self.grad_sum + g

    @property
    def rounds(self):
        return len(self.losses)

    @property
    def cumulative_loss(self):
        return float(np.sum(self.losses))

    def regret(self, domain, scale=1.0):
        """Regret against the best fixed point of ``scale * domain`` (needs its support)."""
        if self.grad_sum is None:
            return 0.0
        best = -scale * domain.support(-self.grad_sum)[0]
        return self.cumulative_loss - best


class OnlineGradientDescent:
    """Stateful OGD learner: read :attr:`point`, then call :meth:`update` with the subgradient."""

    def __init__(self, domain, eta, x0=None):
        if not eta > 0:
            raise ValueError("step size must be positive")
        self.domain = domain
        self.eta = float(eta)
        self.point = initial_point(domain) if x0 is None else as_vector(x0, domain.dim).copy()
        self.t = 0

    def update(self, g):
        self.point = self.domain.project(self.point - self.eta * g)
        self.t += 1
        return self.point


def run_ogd(domain, subgradients, eta):
    """Run OGD on linear losses; returns the iterates (one per round) and the ledger."""
    learner = OnlineGradientDescent(domain, eta)
    ledger = RegretLedger()
    iterates = []
    for g in subgradients:
        g = as_vector(g, domain.dim, "subgradient")
        iterates.append(learner.point.copy())
        ledger.record(learner.point, g)
        learner.update(g)
    return np.array(iterates).reshape(len(iterates), domain.dim), ledger
