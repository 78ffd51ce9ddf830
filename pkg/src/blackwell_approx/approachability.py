"""OCO-based approachability driven by approximate infeasible saddle-point oracles.

The player runs online gradient descent over the unit ball on
``f_t(w) = h(w) - <w, l(x_t, y_t)>`` where ``h`` is the support function of
a scaled (and, when the adversary's set is only approximable, shifted)
target.  Each round a saddle-point oracle turns ``w_t`` into an infeasible
point ``x_t`` and a feasible action ``s_t <= x_t``; only ``s_t`` is played.
"""
from __future__ import annotations

import enum
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .bilinear import BilinearLoss
from .oco import OnlineGradientDescent
from .saddle import aispox, aispoy, aispoyx, fw_iteration_bound
from .sets import (
    Ball,
    ShiftedScaledView,
    UnsupportedOperation,
    distance_to_downward_closure,
    distance_to_set,
)

SQRT2 = np.sqrt(2.0)


class ConfigurationError(ValueError):
    """Inconsistent instance or scenario parameters."""


class ProtocolError(RuntimeError):
    """A participant broke the game protocol (e.g. an infeasible adversary action)."""


class Scenario(str, enum.Enum):
    X_ONLY = "x_only"
    Y_ONLY = "y_only"
    BOTH = "both"


@dataclass(frozen=True)
class ScenarioConfig:
    """Which sets are approximable, their ratios and the horizon."""

    scenario: Scenario
    T: int
    alpha_x: float = 1.0
    alpha_y: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        if int(self.T) != self.T or self.T < 1:
            raise ConfigurationError("horizon T must be a positive integer")
        if self.alpha_x < 1:
            raise ConfigurationError("alpha_x must be >= 1")
        if not 0 < self.alpha_y <= 1:
            raise ConfigurationError("alpha_y must lie in (0, 1]")
        if self.scenario is Scenario.X_ONLY and self.alpha_y != 1:
            raise ConfigurationError("the x_only scenario has an exact adversary set (alpha_y = 1)")
        if self.scenario is Scenario.Y_ONLY and self.alpha_x != 1:
            raise ConfigurationError("the y_only scenario has an exact player set (alpha_x = 1)")

    @property
    def eps(self):
        """Saddle-oracle accuracy implied by the schedules."""
        if self.scenario is Scenario.BOTH:
            return 1.0 / np.sqrt(self.T)
        return 1.5 / np.sqrt(self.T)


@dataclass
class BlackwellInstance:
    """Player set ``X``, adversary set ``Y``, bilinear loss and target ``S``.

    ``oracle_x`` / ``oracle_y`` are the approximation oracles through which the
    approximable sets are accessed; the scenario decides which are required.
    """

    X: object
    Y: object
    loss: BilinearLoss
    S: object
    oracle_x: object = None
    oracle_y: object = None

    def __post_init__(self):
        if (self.X.dim, self.Y.dim, self.S.dim) != (self.loss.n, self.loss.m, self.loss.d):
            raise ConfigurationError(
                f"dimension mismatch: X {self.X.dim}, Y {self.Y.dim}, S {self.S.dim} vs loss "
                f"(n={self.loss.n}, m={self.loss.m}, d={self.loss.d})"
            )
        if not (self.X.nonneg and self.Y.nonneg):
            raise ConfigurationError("action sets must lie in the nonnegative orthant")
        if self.oracle_x is not None and self.oracle_x.domain is not self.X:
            raise ConfigurationError("oracle_x must be an oracle over X")
        if self.oracle_y is not None and self.oracle_y.domain is not self.Y:
            raise ConfigurationError("oracle_y must be an oracle over Y")


@dataclass(frozen=True)
class GameConstants:
    loss_norm: float
    R_X: float
    R_Y: float
    D_X: float
    D_Y: float
    R_S: float
    R_tilde: float
    G_X: float
    G_Y: float
    G: float
    N: int
    eta: float
    mu: float
    xi: float | None
    xi_original: float | None
    R_SP: float
    eps: float
    target_scale: float
    bound: float
    fw_cap: int | None

    def as_dict(self):
        return {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in asdict(self).items()}


def _positive(name, value):
    if not value > 0 or not np.isfinite(value):
        raise ConfigurationError(f"{name} must be positive and finite, got {value}")


def compute_constants(instance, cfg):
    """All step sizes, iteration counts and certified bounds for a scenario.

    Raises
    ------
    ConfigurationError
        If a quantity used as a divisor is zero (e.g. a zero loss or a
        zero-radius set in a scaled role).
    """
    nl = instance.loss.norm_bound
    R_X, R_Y = instance.X.radius, instance.Y.radius
    D_X, D_Y = instance.X.diameter, instance.Y.diameter
    R_S = instance.S.radius
    ax, ay, T = cfg.alpha_x, cfg.alpha_y, cfg.T
    G_Y = (ax + 2.0) * nl * R_X
    G_X = (ay + 2.0) * nl * R_Y
    xi = xi_original = None
    fw_cap = None
    if cfg.scenario is Scenario.X_ONLY:
        _positive("G_Y", G_Y)
        R_tilde = 0.0
        N = max(1, int(np.ceil(G_Y**2 * D_Y**2 * T)))
        mu = D_Y / (G_Y * np.sqrt(N)) if D_Y > 0 else 1.0
        G = ax * R_S + nl * (ax + 2.0) * R_X * R_Y
        R_SP = (ax + 2.0) * R_X
        scale = ax
        bound = (6.0 * G + 3.0) / (2.0 * np.sqrt(T))
    elif cfg.scenario is Scenario.Y_ONLY:
        _positive("G_X", G_X)
        R_tilde = nl * R_X * R_Y
        N = max(1, int(np.ceil(G_X**2 * D_X**2 * T / ay**2)))
        mu = D_X / (G_X * np.sqrt(N)) if D_X > 0 else 1.0
        G = (R_S + R_tilde) / ay + nl * R_X * R_Y
        R_SP = R_X
        scale = 1.0 / ay
        bound = (6.0 * G + 3.0) / (2.0 * np.sqrt(T))
    else:
        _positive("G_X", G_X)
        _positive("R_X", R_X)
        R_tilde = nl * R_X * R_Y
        N = max(1, int(np.ceil((SQRT2 + 1.0) ** 2 * ax**2 * G_X**2 * R_X**2 * T / ay**2)))
        mu = SQRT2 * ax * R_X / (G_X * np.sqrt(N))
        # FW tolerance must shrink like 1/N; a 1/sqrt(N) tolerance leaves a regret term linear in N
        xi = SQRT2 * ax**2 * R_X**2 / N
        xi_original = ax * R_X * G_X / (2.0 * np.sqrt(N))
        fw_cap = fw_iteration_bound(ax, R_X, xi)
        G = ax * (R_S + R_tilde) / ay + nl * (ax + 2.0) * R_X * R_Y
        R_SP = (ax + 2.0) * R_X
        scale = ax / ay
        bound = (3.0 * G + 3.0) / np.sqrt(T)
    _positive("G", G)
    eta = 2.0 / (G * np.sqrt(T))
    return GameConstants(
        loss_norm=nl, R_X=R_X, R_Y=R_Y, D_X=D_X, D_Y=D_Y, R_S=R_S, R_tilde=R_tilde,
        G_X=G_X, G_Y=G_Y, G=G, N=N, eta=eta, mu=mu, xi=xi, xi_original=xi_original,
        R_SP=R_SP, eps=cfg.eps, target_scale=scale, bound=bound, fw_cap=fw_cap,
    )


def target_view(instance, cfg, constants=None):
    """The modified target as a scaled and shifted view of ``S``."""
    c = constants or compute_constants(instance, cfg)
    return ShiftedScaledView(instance.S, c.target_scale, c.R_tilde)


def downward_target(instance, cfg, constants=None):
    """Unshifted scaled target whose downward closure the feasible losses approach."""
    c = constants or compute_constants(instance, cfg)
    return ShiftedScaledView(instance.S, c.target_scale, 0.0)


def modified_support(instance, cfg, w, tol=1e-9):
    """Support value and maximizer of the modified target at ``w``."""
    w = np.asarray(w, dtype=float)
    if np.linalg.norm(w) > 1.0 + tol:
        raise ValueError("w must lie in the unit ball")
    return target_view(instance, cfg).support(w)


# --- driver -------------------------------------------------------------------


@dataclass
class Transcript:
    """Per-round record of one game.

    Rounds are 1-based in ``dist_rounds``; arrays indexed by round have one
    row per round.  ``calls_x``/``calls_y`` are cumulative oracle-call counts
    after each round.
    """

    w: np.ndarray
    x: np.ndarray
    s: np.ndarray
    y: np.ndarray
    loss_x: np.ndarray
    loss_s: np.ndarray
    f_values: np.ndarray
    calls_x: np.ndarray
    calls_y: np.ndarray
    wall_ms: np.ndarray
    dist_rounds: np.ndarray
    d_infeasible: np.ndarray
    d_feasible_downward: np.ndarray
    constants: GameConstants
    config: ScenarioConfig
    fw_iterations: int = 0
    inner_regrets: list = field(default_factory=list)

    @property
    def T(self):
        return self.w.shape[0]

    @property
    def avg_x(self):
        return np.cumsum(self.loss_x, axis=0) / np.arange(1, self.T + 1)[:, None]

    @property
    def avg_s(self):
        return np.cumsum(self.loss_s, axis=0) / np.arange(1, self.T + 1)[:, None]

    def domination_gap(self):
        """Largest ``avg_s - avg_x`` over all prefixes and coordinates (<= 0 when dominated)."""
        return float(np.max(self.avg_s - self.avg_x))

    def ball_regret(self):
        """Realized regret of the ball learner over all ``T`` rounds.

        The best fixed ``w`` attains ``-T d(avg_x, target)`` by the dual
        distance formula, so this needs the final infeasible distance.
        """
        return float(np.sum(self.f_values) + self.T * self.d_infeasible[-1])

    @property
    def final_d_infeasible(self):
        return float(self.d_infeasible[-1])

    @property
    def final_d_feasible_downward(self):
        return float(self.d_feasible_downward[-1])


def _saddle_runner(instance, cfg, c):
    sc = cfg.scenario
    if sc is Scenario.X_ONLY:
        ox = instance.oracle_x
        if ox is None:
            raise ConfigurationError("x_only scenario needs an oracle for X")
        if ox.maximize or ox.alpha != cfg.alpha_x:
            raise ConfigurationError("oracle_x must be minimizing with ratio alpha_x")
        return lambda A: aispox(A, ox, c.N, OnlineGradientDescent(instance.Y, c.mu))
    if sc is Scenario.Y_ONLY:
        oy = instance.oracle_y
        if oy is None:
            raise ConfigurationError("y_only scenario needs an oracle for Y")
        if not oy.maximize or oy.alpha != cfg.alpha_y:
            raise ConfigurationError("oracle_y must be maximizing with ratio alpha_y")
        return lambda A: aispoy(A, oy, c.N, OnlineGradientDescent(instance.X, c.mu))
    ox, oy = instance.oracle_x, instance.oracle_y
    if ox is None or oy is None:
        raise ConfigurationError("both scenario needs oracles for X and Y")
    if ox.maximize or ox.alpha != cfg.alpha_x:
        raise ConfigurationError("oracle_x must be minimizing with ratio alpha_x")
    if not oy.maximize or oy.alpha != cfg.alpha_y:
        raise ConfigurationError("oracle_y must be maximizing with ratio alpha_y")
    return lambda A: aispoyx(A, ox, oy, c.N, c.mu, c.xi)


def _calls(oracle):
    return 0 if oracle is None else oracle.calls


def run_approachability(instance, cfg, adversary, seed=0, stride=1, timing=True):
    """Play ``cfg.T`` rounds and return the :class:`Transcript`.

    Parameters
    ----------
    instance : BlackwellInstance
    cfg : ScenarioConfig
    adversary : Adversary
        Sees only the played feasible actions ``s_1..s_t``.
    seed : int
        Seeds the adversary's randomness.
    stride : int
        Distances are computed every ``stride`` rounds and at the last round.
    timing : bool
        Record wall-clock time per round (zeros otherwise, for reproducible output).
    """
    if stride < 1:
        raise ValueError("stride must be >= 1")
    c = compute_constants(instance, cfg)
    S_tilde = target_view(instance, cfg, c)
    S_down = downward_target(instance, cfg, c)
    saddle = _saddle_runner(instance, cfg, c)
    loss = instance.loss
    T, d = cfg.T, loss.d
    ball = OnlineGradientDescent(Ball(d, 1.0), c.eta)
    adversary.start(instance, T, np.random.default_rng(seed))

    W = np.zeros((T, d))
    Xs = np.zeros((T, loss.n))
    Ss = np.zeros((T, loss.n))
    Ys = np.zeros((T, loss.m))
    LX = np.zeros((T, d))
    LS = np.zeros((T, d))
    F = np.zeros(T)
    CX = np.zeros(T, dtype=np.int64)
    CY = np.zeros(T, dtype=np.int64)
    WALL = np.zeros(T)
    rounds, dinf, dfeas = [], [], []
    sum_x = np.zeros(d)
    sum_s = np.zeros(d)
    fw_total = 0
    regrets = []
    cx0, cy0 = _calls(instance.oracle_x), _calls(instance.oracle_y)

    for t in range(T):
        t0 = time.perf_counter()
        w = ball.point.copy()
        out = saddle(loss.weighted(w))
        y = np.asarray(adversary.respond(t, out.s.copy()), dtype=float)
        if y.shape != (loss.m,) or not instance.Y.contains(y):
            raise ProtocolError(f"adversary action at round {t + 1} is not in Y: {y}")
        lx = loss(out.x, y)
        ls = loss(out.s, y)
        hval, z = S_tilde.support(w)
        F[t] = hval - float(w @ lx)
        ball.update(z - lx)
        W[t], Xs[t], Ss[t], Ys[t], LX[t], LS[t] = w, out.x, out.s, y, lx, ls
        CX[t] = _calls(instance.oracle_x) - cx0
        CY[t] = _calls(instance.oracle_y) - cy0
        fw_total += out.fw_iterations
        regrets.append(out.regret)
        sum_x += lx
        sum_s += ls
        if (t + 1) % stride == 0 or t == T - 1:
            k = t + 1
            rounds.append(k)
            dinf.append(distance_to_set(sum_x / k, S_tilde))
            dfeas.append(distance_to_downward_closure(sum_s / k, S_down))
        if timing:
            WALL[t] = 1e3 * (time.perf_counter() - t0)

    return Transcript(
        w=W, x=Xs, s=Ss, y=Ys, loss_x=LX, loss_s=LS, f_values=F,
        calls_x=CX, calls_y=CY, wall_ms=WALL,
        dist_rounds=np.array(rounds), d_infeasible=np.array(dinf),
        d_feasible_downward=np.array(dfeas),
        constants=c, config=cfg, fw_iterations=fw_total, inner_regrets=regrets,
    )


def oracle_budget(cfg, constants):
    """Expected oracle-call totals ``(calls_x, calls_y)``; in the both scenario
    the first entry is the worst-case cap."""
    T, N = cfg.T, constants.N
    if cfg.scenario is Scenario.X_ONLY:
        return T * N, 0
    if cfg.scenario is Scenario.Y_ONLY:
        return 0, T * N
    return T * (1 + N * constants.fw_cap), T * N


# --- approachability condition --------------------------------------------------


@dataclass
class ApproachabilityReport:
    directions: np.ndarray
    slacks: np.ndarray
    tol: float

    @property
    def worst_slack(self):
        return float(np.max(self.slacks))

    @property
    def approachable(self):
        return bool(self.worst_slack <= self.tol)


def _vertex_form(K, role):
    """``(V, scale, shift)`` with ``K = scale * (conv(V) - B_+(shift))``."""
    if isinstance(K, ShiftedScaledView):
        V, sc, sh = _vertex_form(K.base, role)
        if sh != 0.0:
            raise UnsupportedOperation("nested shifted views are not supported")
        return V, K.scale * sc, K.shift
    V = K.vertices
    if V is None:
        raise UnsupportedOperation(f"{role} set {type(K).__name__} has no vertex list")
    return np.asarray(V, dtype=float), 1.0, 0.0


def saddle_value(A, X, Y):
    """``min_{x in X} max_{y in Y} x^T A y`` and a minimizer, solved exactly as a conic program.

    ``X`` must be (a scaled view of) a set with a vertex list; ``Y`` may in
    addition be shifted by ``-B_+(r)``, whose contribution to the inner max is
    ``r |(A^T x)^-|``.
    """
    import cvxpy as cp

    VX, cx, shx = _vertex_form(X, "player")
    if shx != 0.0:
        raise UnsupportedOperation("shifted player sets are not supported")
    VY, cy, shy = _vertex_form(Y, "adversary")
    lam = cp.Variable(VX.shape[0], nonneg=True)
    x = cx * (VX.T @ lam)
    q = np.asarray(A, dtype=float).T @ x
    inner = cp.max(VY @ q)
    if shy > 0.0:
        inner = inner + shy * cp.norm(cp.neg(q), 2)
    prob = cp.Problem(cp.Minimize(cy * inner), [cp.sum(lam) == 1])
    prob.solve(solver=cp.CLARABEL)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        raise RuntimeError(f"saddle-point solve failed with status {prob.status}")
    return float(prob.value), cx * (VX.T @ lam.value)


@dataclass(frozen=True)
class ModifiedInstance:
    """Sets of a modified game; unlike :class:`BlackwellInstance` they may leave the orthant."""

    X: object
    Y: object
    loss: BilinearLoss
    S: object


def scaled_instance(instance, alpha_x=1.0, alpha_y=1.0):
    """``(alpha_x X, Y / alpha_y, l, (alpha_x / alpha_y) S)``: approachable whenever the base is."""
    return ModifiedInstance(
        ShiftedScaledView(instance.X, alpha_x),
        ShiftedScaledView(instance.Y, 1.0 / alpha_y),
        instance.loss,
        ShiftedScaledView(instance.S, alpha_x / alpha_y),
    )


def shifted_instance(instance, R):
    """``(X, Y - B_+(R), l, S - B_+(|l| R_X R))``: approachable whenever the base is."""
    r_tilde = instance.loss.norm_bound * instance.X.radius * R
    return ModifiedInstance(
        instance.X,
        ShiftedScaledView(instance.Y, 1.0, R),
        instance.loss,
        ShiftedScaledView(instance.S, 1.0, r_tilde),
    )


def check_approachable(instance, w_samples=64, tol=1e-6, rng=None):
    """Test the approachability condition on sampled unit directions.

    For each direction ``w`` the slack is
    ``min_{x in X} max_{y in Y} <w, l(x, y)> - h_S(w)``, with the saddle value
    solved exactly.  The instance is flagged approachable on the sample if
    every slack is at most ``tol``.

    Raises
    ------
    UnsupportedOperation
        If a set has no vertex list.
    """
    rng = np.random.default_rng(rng)
    loss = instance.loss
    W = rng.standard_normal((w_samples, loss.d))
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    slacks = np.empty(w_samples)
    for k, w in enumerate(W):
        val, _ = saddle_value(loss.weighted(w), instance.X, instance.Y)
        slacks[k] = val - instance.S.support(w)[0]
    return ApproachabilityReport(W, slacks, tol)
