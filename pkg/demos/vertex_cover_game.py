"""A repeated vertex-cover game played through a 2-approximation oracle.

The player picks a vertex cover of a star graph each round, and only a
local-ratio 2-approximation is available for that choice.  The adversary sets
vertex weights in [0, b].  The vector loss has one coordinate for the hub's
cost and one for the leaves' cost.  The target keeps the leaves' cost at zero
and the hub's cost at most b.

With an exact oracle this target is approachable: always cover the hub.  With
the approximation oracle the guarantee is relaxed.  The feasible average loss
approaches the downward closure of 2S at rate 1/sqrt(T).
"""
import numpy as np

from blackwell_approx import (
    BestResponseAdversary,
    Box,
    ScenarioConfig,
    build_vertex_cover_game,
    distance_to_set,
    run_approachability,
)

b = 0.025
star = [(0, 1), (0, 2), (0, 3), (0, 4)]

print(f"{'T':>5} {'N':>6} {'d(avg_s, S)':>12} {'d(avg_s, 2S down)':>18} {'bound':>8} {'calls':>9}")
for T in (16, 64, 256):
    game, oracle = build_vertex_cover_game(5, star, [0], [1, 2, 3, 4], b, S=Box([0, 0], [b, 0]))
    tr = run_approachability(game, ScenarioConfig("x_only", T, alpha_x=2.0), BestResponseAdversary(), stride=T)
    c = tr.constants
    print(
        f"{T:>5} {c.N:>6} {distance_to_set(tr.avg_s[-1], game.S):>12.4f} "
        f"{tr.final_d_feasible_downward:>18.4f} {c.bound:>8.4f} {oracle.calls:>9}"
    )

# The played covers: mixed strategies over covers, averaged over the game.
print("average played cover:", np.round(tr.s.mean(axis=0), 3))
print("feasible loss never exceeds the infeasible one:", tr.domination_gap() <= 0)
