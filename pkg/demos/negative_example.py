"""Why the target has to be relaxed when only an approximation oracle exists.

The player's set is the segment {(z, 1) : 1 <= z <= alpha}.  The target is
the single point (1, 1), which the player reaches by playing (1, 1) forever.
This oracle is a valid alpha-approximation but always answers (alpha, 1).
Every feasible action the algorithm can produce is therefore (alpha, 1).  The
distance to the original target stays at alpha - 1, yet the downward closure
of alpha times the target is reached exactly.
"""
from blackwell_approx import (
    BestResponseAdversary,
    ScenarioConfig,
    build_negative_instance,
    check_approachable,
    distance_to_set,
    run_approachability,
)

for alpha in (1.5, 2.0, 3.0):
    game, oracle = build_negative_instance(alpha)
    rep = check_approachable(game, w_samples=32, rng=0)
    tr = run_approachability(game, ScenarioConfig("x_only", 100, alpha_x=alpha), BestResponseAdversary())
    print(
        f"alpha={alpha}: target approachable with full access: {rep.approachable}; "
        f"average loss {tr.avg_s[-1]}; distance to target {distance_to_set(tr.avg_s[-1], game.S):.3f}; "
        f"distance to relaxed target {tr.final_d_feasible_downward:.3f}"
    )
