"""Experiment specs (JSON), the runner and its CSV/JSON outputs."""
from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .approachability import (
    BlackwellInstance,
    ConfigurationError,
    ScenarioConfig,
    oracle_budget,
    run_approachability,
)
from .bilinear import BilinearLoss
from .instances import build_cyclic_game, build_negative_instance, build_vertex_cover_game, make_adversary
from .oracles import ExactOracle, SloppyOracle, read_edge_list
from .sets import Box, NonnegBall, Simplex, Singleton, VPolytope, distance_to_set

CSV_HEADER = ["run_id", "T", "t", "d_infeasible", "d_feasible_downward", "calls_x", "calls_y", "wall_ms"]


def build_set(desc):
    """Set from a ``{"kind": ..., ...}`` description."""
    kind = desc.get("kind")
    if kind == "box":
        return Box(desc["lo"], desc["hi"])
    if kind == "simplex":
        return Simplex(int(desc["dim"]), float(desc.get("total", 1.0)))
    if kind == "vpolytope":
        return VPolytope(desc["points"])
    if kind == "ball_pos":
        return NonnegBall(int(desc["dim"]), float(desc.get("radius", 1.0)))
    if kind == "singleton":
        return Singleton(desc["point"])
    raise ConfigurationError(f"unknown set kind {kind!r}")


def _build_oracle(desc, domain, maximize):
    if desc is None:
        return None
    kind = desc.get("kind", "exact")
    if kind == "exact":
        return ExactOracle(domain, maximize=maximize)
    if kind == "sloppy":
        return SloppyOracle(domain, float(desc["alpha"]), maximize=maximize)
    raise ConfigurationError(f"unknown oracle kind {kind!r}")


def build_instance(desc, base_dir=None):
    """Instance from the ``instance`` block of a spec."""
    kind = desc.get("kind")
    p = desc.get("params", {})
    if kind == "vertex_cover":
        if "edge_file" in p:
            path = Path(p["edge_file"])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            edges = read_edge_list(path)
        else:
            edges = [tuple(e) for e in p["edges"]]
        n = int(p["n"])
        S = build_set(p["S"]) if "S" in p else None
        inst, _ = build_vertex_cover_game(n, edges, p["part1"], p["part2"], float(p["weight_bound"]), S=S)
        return inst
    if kind == "negative":
        return build_negative_instance(float(p["alpha_x"]))[0]
    if kind == "cyclic":
        return build_cyclic_game(
            int(p["d"]), float(p.get("scale", 1.0)), float(p.get("radius", 1.0)),
            float(p.get("alpha_x", 1.0)), float(p.get("alpha_y", 1.0)),
        )
    if kind == "generic":
        X, Y, S = build_set(p["X"]), build_set(p["Y"]), build_set(p["S"])
        return BlackwellInstance(
            X, Y, BilinearLoss(p["loss"]), S,
            oracle_x=_build_oracle(p.get("oracle_x"), X, False),
            oracle_y=_build_oracle(p.get("oracle_y"), Y, True),
        )
    raise ConfigurationError(f"unknown instance kind {kind!r}")


@dataclass
class ExperimentSpec:
    instance: dict
    scenario: dict
    adversary: dict
    horizons: list
    seed: int = 0
    stride: int = 1
    run_id: str = "run"
    out_dir: str = "results"
    base_dir: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        hs = [int(h) for h in self.horizons]
        if any(h < 1 for h in hs) or any(b <= a for a, b in zip(hs, hs[1:])):
            raise ConfigurationError("horizons must be positive and strictly increasing")
        self.horizons = hs

    @classmethod
    def from_dict(cls, d, base_dir=None):
        known = {"instance", "scenario", "adversary", "horizons", "seed", "stride", "run_id", "out_dir"}
        missing = {"instance", "scenario", "horizons"} - d.keys()
        if missing:
            raise ConfigurationError(f"spec is missing fields: {sorted(missing)}")
        return cls(
            instance=d["instance"], scenario=d["scenario"],
            adversary=d.get("adversary", {"kind": "best_response"}),
            horizons=list(d["horizons"]), seed=int(d.get("seed", 0)),
            stride=int(d.get("stride", 1)), run_id=str(d.get("run_id", "run")),
            out_dir=str(d.get("out_dir", "results")), base_dir=base_dir,
            extra={k: v for k, v in d.items() if k not in known},
        )

    @classmethod
    def load(cls, path):
        path = Path(path)
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise OSError(f"cannot read spec file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"spec file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data, base_dir=path.parent)

    def config(self, T):
        sc = self.scenario
        return ScenarioConfig(sc["mode"], T, float(sc.get("alpha_x", 1.0)), float(sc.get("alpha_y", 1.0)))


def _fmt(v):
    return repr(float(v))


def transcript_rows(run_id, tr):
    rows = []
    elapsed = np.cumsum(tr.wall_ms)
    for k, t in enumerate(tr.dist_rounds):
        i = t - 1
        rows.append([
            run_id, str(tr.T), str(int(t)), _fmt(tr.d_infeasible[k]), _fmt(tr.d_feasible_downward[k]),
            str(int(tr.calls_x[i])), str(int(tr.calls_y[i])), "%.3f" % elapsed[i],
        ])
    return rows


def summarize(run_id, instance, tr):
    """JSON summary; the bound flag is recomputed from the CSV-formatted final row."""
    c, cfg = tr.constants, tr.config
    final_dfd = float(_fmt(tr.final_d_feasible_downward))
    budget_x, budget_y = oracle_budget(cfg, c)
    calls_x, calls_y = int(tr.calls_x[-1]), int(tr.calls_y[-1])
    if cfg.scenario.value == "both":
        within = calls_x <= budget_x and calls_y == budget_y
    else:
        within = calls_x == budget_x and calls_y == budget_y
    return {
        "run_id": run_id,
        "T": tr.T,
        "scenario": cfg.scenario.value,
        "final_distances": {
            "d_infeasible": float(_fmt(tr.final_d_infeasible)),
            "d_feasible_downward": final_dfd,
            "d_feasible_to_S": float(distance_to_set(tr.avg_s[-1], instance.S)),
        },
        "certified_bounds": {"value": c.bound, "satisfied": bool(final_dfd <= c.bound)},
        "domination_gap": tr.domination_gap(),
        "ball_regret": tr.ball_regret(),
        "oracle_calls": {
            "x": calls_x, "y": calls_y, "budget_x": budget_x, "budget_y": budget_y,
            "within_budget": bool(within), "fw_iterations": tr.fw_iterations,
        },
        "constants": c.as_dict(),
    }


def run_experiment(spec, out_dir=None, seed=None, stride=None, timing=True, log=None):
    """Run every horizon of ``spec``; write one CSV and one JSON per horizon plus an index.

    Returns
    -------
    int
        0 if every certified bound holds, 2 otherwise.
    """
    if not spec.horizons:
        return 0
    log = sys.stderr if log is None else log
    out = Path(out_dir if out_dir is not None else spec.out_dir)
    seed = spec.seed if seed is None else seed
    stride = spec.stride if stride is None else stride
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    index = {"run_id": spec.run_id, "seed": seed, "runs": []}
    failures = []
    for T in spec.horizons:
        instance = build_instance(spec.instance, spec.base_dir)
        adv = make_adversary(spec.adversary.get("kind", "best_response"), spec.adversary.get("params"))
        tr = run_approachability(instance, spec.config(T), adv, seed=seed, stride=stride, timing=timing)
        stem = f"{spec.run_id}_T{T}"
        csv_path, json_path = out / f"{stem}.csv", out / f"{stem}.json"
        summary = summarize(spec.run_id, instance, tr)
        try:
            with open(csv_path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(CSV_HEADER)
                w.writerows(transcript_rows(spec.run_id, tr))
            with open(json_path, "w") as fh:
                json.dump(summary, fh, indent=2, sort_keys=True)
        except OSError as exc:
            raise OSError(f"cannot write results for T={T} under {out}: {exc}") from exc
        index["runs"].append({"T": T, "csv": csv_path.name, "summary": json_path.name})
        if not summary["certified_bounds"]["satisfied"]:
            failures.append(summary)
    with open(out / f"{spec.run_id}_index.json", "w") as fh:
        json.dump(index, fh, indent=2)
    for s in failures:
        print(
            f"BOUND VIOLATION run={s['run_id']} T={s['T']}: d_feasible_downward="
            f"{s['final_distances']['d_feasible_downward']:.6g} > bound {s['certified_bounds']['value']:.6g}",
            file=log,
        )
    return 2 if failures else 0
