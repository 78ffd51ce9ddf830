"""Games where the adversary's set, or both sets, are only reachable approximately.

Both players choose from a scaled simplex and the loss coordinates are cyclic
shifts of one matrix.  The adversary's best responses come from a maximizing
oracle that only guarantees a fraction of the optimum.  In the second game the
player's choices also come from a minimizing approximation oracle, and
projections are replaced by Frank-Wolfe steps on the extended oracle.

In the second game the relaxed distance plateaus over the short horizons.
There the Frank-Wolfe tolerance is larger than a gradient step, so the
player's inner point does not move.  The tolerance shrinks like 1/N and the
step like 1/sqrt(N), so the point starts moving at longer horizons.
"""
from blackwell_approx import BestResponseAdversary, ScenarioConfig, build_cyclic_game, run_approachability

r = 0.3
games = [
    ("adversary only", build_cyclic_game(3, 0.047 / r**2, r, alpha_y=0.5), dict(alpha_y=0.5), "y_only"),
    ("both sides", build_cyclic_game(3, 0.0276 / r**2, r, alpha_x=1.5, alpha_y=0.75),
     dict(alpha_x=1.5, alpha_y=0.75), "both"),
]
for label, game, ratios, mode in games:
    for T in (16, 64, 256):
        tr = run_approachability(game, ScenarioConfig(mode, T, **ratios), BestResponseAdversary(), stride=T)
        c = tr.constants
        print(
            f"{label:>14} T={T:<3} N={c.N:<5} relaxed distance {tr.final_d_feasible_downward:.4f} "
            f"(bound {c.bound:.3f}), oracle calls x={tr.calls_x[-1]} y={tr.calls_y[-1]}, "
            f"Frank-Wolfe iterations {tr.fw_iterations}"
        )
