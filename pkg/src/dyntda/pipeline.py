"""End-to-end run: integrate, encode, overlap, sweep, classify, write."""
from __future__ import annotations

import contextlib
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .analysis import DynamicsSignature, SweepResult, classify_dynamics, snap_grid, threshold_sweep
from .config import PipelineConfig
from .errors import DynTDAError
from .odesolve import (
    TimeGrid,
    Trajectory,
    assemble_fd_system,
    chebyshev_spectral_solve,
    euler_integrate,
    linear_exact_integrate,
    solve_fd_system,
)
from .quantumsim import OverlapMatrix, pairwise_overlaps

OUTPUT_FILES = ("trajectory.csv", "overlaps.csv", "sweep.json", "signature.json", "betti_curves.csv")


class StageError(DynTDAError):
    """Unexpected failure inside a stage, tagged with that stage."""

    def __init__(self, module: str, cause: Exception):
        self.module = module
        self.cause = cause
        super().__init__(f"{type(cause).__name__}: {cause}")


@contextlib.contextmanager
def stage(name: str):
    try:
        yield
    except DynTDAError:
        raise
    except (ValueError, TypeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        raise StageError(name, exc) from exc


@dataclass(frozen=True, eq=False)
class PipelineResult:
    trajectory: Trajectory
    overlaps: OverlapMatrix
    sweep: SweepResult
    signature: DynamicsSignature


def sample_trajectory(cfg: PipelineConfig) -> Trajectory:
    if cfg.scheme == "chebyshev":
        times = cfg.times if cfg.times is not None else np.linspace(0.0, cfg.t_end, cfg.m)
        return chebyshev_spectral_solve(cfg.system, cfg.x0, cfg.t_end, cfg.n_nodes, times).trajectory
    grid = TimeGrid(cfg.t_end, cfg.n_steps)
    if cfg.scheme == "euler":
        full = euler_integrate(cfg.system, cfg.x0, grid)
    elif cfg.scheme == "linear_exact":
        full = linear_exact_integrate(cfg.system, cfg.x0, grid)
    else:
        full = solve_fd_system(assemble_fd_system(cfg.system, cfg.x0, grid))
    if cfg.times is None:
        return full.subsample(cfg.m)
    idx = np.round(cfg.times / grid.h).astype(int)
    return Trajectory(full.times[idx], full.states[idx], full.source)


def run_pipeline(cfg: PipelineConfig) -> PipelineResult:
    with stage("odesolve"):
        traj = sample_trajectory(cfg)
    with stage("quantumsim"):
        D = pairwise_overlaps(traj, cfg.mode, cfg.shots, cfg.seed)
    with stage("analysis"):
        grid = snap_grid(D, cfg.metric, cfg.grid) if cfg.snap else cfg.grid
        estimator = None if cfg.estimator is None else (*cfg.estimator, cfg.seed)
        sweep = threshold_sweep(D, cfg.metric, grid, cfg.r_max, estimator)
        signature = classify_dynamics(sweep, cfg.p_min, cfg.v_min)
    return PipelineResult(traj, D, sweep, signature)


def render_outputs(result: PipelineResult) -> dict[str, str]:
    return {
        "trajectory.csv": io.trajectory_csv(result.trajectory),
        "overlaps.csv": io.overlaps_csv(result.overlaps),
        "sweep.json": io.dumps(result.sweep.to_dict()),
        "signature.json": io.dumps(result.signature.to_dict()),
        "betti_curves.csv": io.betti_curves_csv(result.sweep.csv_rows()),
    }


def write_outputs(result: PipelineResult, out_dir: Path) -> list[Path]:
    """Write every report file or none: files are staged in a sibling temp dir first."""
    out_dir = Path(out_dir)
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    files = render_outputs(result)
    tmp = Path(tempfile.mkdtemp(prefix=".dyntda-", dir=out_dir.parent))
    try:
        for name, text in files.items():
            io.write_text(tmp / name, text)
        out_dir.mkdir(exist_ok=True)
        written = []
        for name in files:
            shutil.move(str(tmp / name), out_dir / name)
            written.append(out_dir / name)
        return written
    finally:
        shutil.rmtree(tmp, ignore_errors=True)
