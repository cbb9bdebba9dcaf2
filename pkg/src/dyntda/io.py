"""File formats written by the pipeline.

All floats are written with 17 significant digits so files round-trip exactly
and reruns are byte-identical.

trajectory.csv   header ``t,x1,...,xN``; one row per sample
overlaps.csv     ``M`` rows of ``M`` comma-separated overlaps, row-major, no header
betti_curves.csv header ``eps,r,s_r,betti,normalized``
sweep.json       ``{"metric", "r_max", "grid", "points": [{"eps", "counts", "n_edges", "betti": [BettiEntry...]}]}``
signature.json   ``{"label", "evidence"}``
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .cliquecomplex import CliqueComplex, Graph
from .odesolve import Trajectory
from .quantumsim import OverlapMatrix


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def trajectory_csv(traj: Trajectory) -> str:
    header = ",".join(["t"] + [f"x{i + 1}" for i in range(traj.dim)])
    rows = [",".join(fmt(v) for v in (t, *x)) for t, x in zip(traj.times, traj.states.real)]
    return "\n".join([header, *rows]) + "\n"


def overlaps_csv(D: OverlapMatrix) -> str:
    return "".join(",".join(fmt(v) for v in row) + "\n" for row in D.values)


def read_overlaps_csv(text: str, mode: str = "exact") -> OverlapMatrix:
    rows = [[float(v) for v in line.split(",")] for line in text.strip().splitlines()]
    return OverlapMatrix(np.array(rows), mode)


def betti_curves_csv(rows) -> str:
    lines = ["eps,r,s_r,betti,normalized"]
    lines += [f"{fmt(eps)},{r},{s_r},{b},{fmt(nb)}" for eps, r, s_r, b, nb in rows]
    return "\n".join(lines) + "\n"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def complex_from_dict(data: dict) -> CliqueComplex:
    n = int(data["n"])
    simp = data["simplices"]
    levels = tuple(tuple(tuple(s) for s in simp[str(r)]) for r in range(len(simp)))
    return CliqueComplex(n, levels)


def graph_from_dict(data: dict) -> Graph:
    return Graph(int(data["n"]), tuple(tuple(e) for e in data["edges"]))


def write_text(path: Path, text: str):
    path.write_text(text, encoding="utf-8", newline="\n")
