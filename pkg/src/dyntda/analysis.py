"""Betti curves over a threshold grid and the dynamics labels read from them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cliquecomplex import DEFAULT_R_MAX, ThresholdRule, build_graph, enumerate_cliques, pair_distances
from .errors import AnalysisError, DynTDAError, SweepError
from .homology import BettiReport, attach_estimates, betti_exact
from .quantumsim import OverlapMatrix

LABELS = ("trivial", "periodic-candidate", "quasi-periodic-candidate", "chaotic-candidate")
P_MIN = 0.25
V_MIN = 1.0
MIN_GRID = 5


@dataclass(frozen=True)
class SweepPoint:
    eps: float
    counts: tuple[int, ...]
    n_edges: int
    report: BettiReport


@dataclass(frozen=True)
class SweepResult:
    metric: str
    points: tuple[SweepPoint, ...]
    r_max: int = DEFAULT_R_MAX

    @property
    def grid(self) -> np.ndarray:
        return np.array([p.eps for p in self.points])

    def betti_curves(self) -> np.ndarray:
        """Rows follow the grid, columns are ``beta_0 .. beta_{r_max-1}``."""
        return np.array([p.report.betti for p in self.points], dtype=int)

    def normalized_curves(self) -> np.ndarray:
        return np.array([p.report.normalized for p in self.points], dtype=float)

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "r_max": self.r_max,
            "grid": [p.eps for p in self.points],
            "points": [
                {"eps": p.eps, "counts": list(p.counts), "n_edges": p.n_edges, "betti": p.report.to_list()}
                for p in self.points
            ],
        }

    def csv_rows(self):
        """``(eps, r, s_r, betti, normalized)`` rows for external plotting."""
        for p in self.points:
            for e in p.report.entries:
                yield p.eps, e.r, e.s_r, e.betti, e.normalized


def snap_grid(D: OverlapMatrix, metric: str, grid) -> np.ndarray:
    """Move each threshold to the middle of the widest distance gap in its own window.

    The window of a grid value reaches halfway to its neighbours (and to 0
    on the left), so the grid stays strictly increasing and keeps its
    length.  Thresholds far from every pair distance make the graphs robust
    to small overlap noise.
    """
    grid = np.asarray(grid, dtype=float)
    if len(grid) < 2:
        return grid.copy()
    dist = pair_distances(D, metric)
    vals = np.unique(dist[np.triu_indices(D.size, k=1)])
    mids = (grid[1:] + grid[:-1]) / 2.0
    lows = np.concatenate([[max(0.0, grid[0] - (mids[0] - grid[0]))], mids])
    highs = np.concatenate([mids, [grid[-1] + (grid[-1] - mids[-1])]])
    out = np.empty_like(grid)
    for i, (lo, hi) in enumerate(zip(lows, highs)):
        inside = vals[(vals > lo) & (vals < hi)]
        pts = np.concatenate([[lo], inside, [hi]])
        k = int(np.argmax(np.diff(pts)))
        out[i] = (pts[k] + pts[k + 1]) / 2.0
    return out


def threshold_sweep(D: OverlapMatrix, metric: str, grid, r_max: int = DEFAULT_R_MAX,
                    estimator: tuple[float, float, int] | None = None) -> SweepResult:
    """Graph, clique complex and Betti numbers ``beta_0 .. beta_{r_max-1}`` per threshold.

    ``estimator = (eps, eta, seed)`` also fills in stochastic normalized-Betti
    estimates.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise AnalysisError("threshold grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise AnalysisError("threshold grid must be strictly increasing")
    if D.size < 2:
        raise AnalysisError("need at least two samples")
    if r_max < 1:
        raise AnalysisError("r_max must be >= 1")
    points = []
    seen: dict[tuple, tuple] = {}  # thresholds in the same distance gap share a graph
    for eps in grid.tolist():
        try:
            G = build_graph(D, ThresholdRule(metric, eps))
            if G.edges not in seen:
                K = enumerate_cliques(G, r_max)
                report = betti_exact(K, r_max - 1)
                if estimator is not None:
                    est_eps, est_eta, seed = estimator
                    report = attach_estimates(report, K, est_eps, est_eta, seed)
                seen[G.edges] = (K.counts, report)
        except DynTDAError as exc:
            raise SweepError(eps, exc) from exc
        counts, report = seen[G.edges]
        points.append(SweepPoint(eps, counts, len(G.edges), report))
    return SweepResult(metric, tuple(points), r_max)


@dataclass(frozen=True)
class DynamicsSignature:
    label: str
    evidence: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"label": self.label, "evidence": self.evidence}


def _window(grid: np.ndarray, mask: np.ndarray) -> list[float] | None:
    if not mask.any():
        return None
    idx = np.nonzero(mask)[0]
    return [float(grid[idx[0]]), float(grid[idx[-1]])]


def classify_dynamics(sweep: SweepResult, p_min: float = P_MIN, v_min: float = V_MIN) -> DynamicsSignature:
    """First matching rule wins: torus pair (2, 1), a persistent loop, large variation, else trivial."""
    n = len(sweep.points)
    if n < MIN_GRID:
        raise AnalysisError(f"classification needs at least {MIN_GRID} grid points, got {n}")
    grid = sweep.grid
    betti = sweep.betti_curves()
    b1 = betti[:, 1] if betti.shape[1] > 1 else np.zeros(n, dtype=int)
    b2 = betti[:, 2] if betti.shape[1] > 2 else np.zeros(n, dtype=int)
    torus = (b1 == 2) & (b2 == 1)
    loop = b1 >= 1
    norm = sweep.normalized_curves()
    variation = float(np.abs(np.diff(norm, axis=0)).sum())

    evidence = {
        "grid_points": n,
        "p_min": p_min,
        "v_min": v_min,
        "torus_fraction": float(torus.mean()),
        "torus_window": _window(grid, torus),
        "loop_fraction": float(loop.mean()),
        "loop_window": _window(grid, loop),
        "variation": variation,
    }
    if torus.mean() >= p_min:
        label = "quasi-periodic-candidate"
    elif loop.mean() >= p_min:
        label = "periodic-candidate"
    elif variation > v_min:
        label = "chaotic-candidate"
    else:
        label = "trivial"
    return DynamicsSignature(label, evidence)
