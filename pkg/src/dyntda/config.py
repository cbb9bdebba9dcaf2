"""Pipeline configuration: TOML files, preset defaults and validation."""
from __future__ import annotations

import copy
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .cliquecomplex import METRICS
from .errors import ConfigError
from .odesolve import OdeSystem
from .presets import PRESETS
from .quantumsim import MODES

SCHEMES = ("euler", "linear_exact", "fd", "chebyshev")
SECTIONS = ("system", "solver", "sampling", "overlap", "sweep", "classify", "estimator", "output")

DEFAULTS = {
    "solver": {"scheme": "euler"},
    "overlap": {"mode": "exact", "shots": 0, "seed": 0},
    "sweep": {"metric": "cosine_dissimilarity", "snap": True, "r_max": 3},
    "classify": {"p_min": 0.25, "v_min": 1.0},
    "estimator": {"enabled": False, "eps": 0.1, "eta": 0.05},
    "output": {},
}


@dataclass(frozen=True, eq=False)
class PipelineConfig:
    system: OdeSystem
    x0: np.ndarray
    scheme: str
    t_end: float
    n_steps: int | None
    n_nodes: int | None
    m: int
    times: np.ndarray | None
    mode: str
    shots: int
    seed: int
    metric: str
    grid: np.ndarray
    snap: bool
    r_max: int
    p_min: float
    v_min: float
    estimator: tuple[float, float] | None
    out_dir: Path | None
    preset: str | None = None


def _merge(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in extra.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def load_raw(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None


def _require(cond: bool, message: str):
    if not cond:
        raise ConfigError(message)


def _number(section: dict, key: str, kind=float, where: str = ""):
    val = section.get(key)
    _require(val is not None, f"missing {where}{key}")
    _require(isinstance(val, (int, float)) and not isinstance(val, bool), f"{where}{key} must be a number")
    if kind is int:
        _require(float(val).is_integer(), f"{where}{key} must be an integer")
        return int(val)
    return float(val)


def _inline_system(sec: dict) -> OdeSystem:
    kind = sec.get("kind")
    try:
        if kind == "linear":
            _require("A" in sec, "system.A is required for linear systems")
            return OdeSystem.linear(sec["A"], sec.get("b"), name="inline")
        if kind == "polynomial":
            _require("terms" in sec, "system.terms is required for polynomial systems")
            terms = [[(coef, tuple(exps)) for coef, exps in comp] for comp in sec["terms"]]
            return OdeSystem.polynomial(terms, name="inline")
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid system: {exc}") from None
    raise ConfigError(f"system.kind must be 'linear' or 'polynomial', got {kind!r}")


def _grid(spec) -> np.ndarray:
    if isinstance(spec, dict):
        start = _number(spec, "start", where="sweep.grid.")
        stop = _number(spec, "stop", where="sweep.grid.")
        num = _number(spec, "num", int, "sweep.grid.")
        _require(num >= 1, "sweep.grid.num must be >= 1")
        grid = np.linspace(start, stop, num)
    elif isinstance(spec, list) and spec:
        _require(all(isinstance(v, (int, float)) for v in spec), "sweep.grid entries must be numbers")
        grid = np.array(spec, dtype=float)
    else:
        raise ConfigError("sweep.grid must be a nonempty list or a {start, stop, num} table")
    _require(bool(np.all(np.diff(grid) > 0)), "sweep.grid must be strictly ascending")
    _require(bool(np.all(grid >= 0)), "sweep.grid must be nonnegative")
    return grid


def resolve(raw: dict, base_dir: Path | None = None) -> PipelineConfig:
    """Merge preset defaults under ``raw`` and validate everything."""
    unknown = set(raw) - set(SECTIONS) - {"preset"}
    _require(not unknown, f"unknown config keys: {sorted(unknown)}")
    preset_name = raw.get("preset")
    merged = copy.deepcopy(DEFAULTS)
    system = None
    if preset_name is not None:
        _require(preset_name in PRESETS, f"unknown preset {preset_name!r}; see `dyntda presets`")
        preset = PRESETS[preset_name]
        merged = _merge(merged, preset.config)
        system = preset.system()
    merged = _merge(merged, {k: v for k, v in raw.items() if k != "preset"})

    sys_sec = merged.get("system", {})
    if "kind" in sys_sec:
        system = _inline_system(sys_sec)
    _require(system is not None, "config needs a preset or a [system] section with kind")
    _require("x0" in sys_sec, "missing system.x0")
    x0 = np.asarray(sys_sec["x0"], dtype=float)
    _require(x0.shape == (system.dim,), f"system.x0 must have {system.dim} entries")
    _require(bool(np.all(np.isfinite(x0))), "system.x0 must be finite")

    sol = merged["solver"]
    scheme = sol.get("scheme")
    _require(scheme in SCHEMES, f"solver.scheme must be one of {SCHEMES}")
    if scheme == "linear_exact":
        _require(system.kind == "linear_const", "linear_exact needs a constant linear system")
    if scheme in ("fd", "chebyshev"):
        _require(system.kind != "polynomial", f"{scheme} needs a linear system")
    t_end = _number(sol, "t_end", where="solver.")
    _require(t_end > 0, "solver.t_end must be positive")
    n_steps = n_nodes = None
    if scheme == "chebyshev":
        n_nodes = _number(sol, "n_nodes", int, "solver.")
        _require(n_nodes >= 2, "solver.n_nodes must be >= 2")
    else:
        n_steps = _number(sol, "n_steps", int, "solver.")
        _require(n_steps >= 1, "solver.n_steps must be >= 1")

    samp = merged.get("sampling", {})
    times = None
    if "times" in samp:
        times = np.asarray(samp["times"], dtype=float)
        _require(times.ndim == 1 and len(times) >= 2, "sampling.times needs at least two values")
        _require(bool(np.all(np.diff(times) > 0)), "sampling.times must be strictly increasing")
        _require(bool(times[0] >= 0 and times[-1] <= t_end), "sampling.times must lie in [0, t_end]")
        if n_steps is not None:
            h = t_end / n_steps
            k = times / h
            _require(bool(np.all(np.abs(k - np.round(k)) <= 1e-9 * max(1.0, n_steps))),
                     "sampling.times must be solver grid nodes")
        m = len(times)
    else:
        m = _number(samp, "m", int, "sampling.")
        _require(m >= 2, "sampling.m must be >= 2")
        if n_steps is not None:
            _require(m <= n_steps + 1, f"sampling.m={m} exceeds the {n_steps + 1} available grid nodes")

    ov = merged["overlap"]
    mode = ov.get("mode")
    _require(mode in MODES, f"overlap.mode must be one of {MODES}")
    shots = _number(ov, "shots", int, "overlap.")
    seed = _number(ov, "seed", int, "overlap.")
    _require(0 <= seed < 2**64, "overlap.seed must be a 64-bit unsigned integer")
    if mode == "swap_test":
        _require(shots >= 1, "swap_test needs overlap.shots >= 1")
    elif mode == "hadamard_test":
        _require(shots >= 2, "hadamard_test needs overlap.shots >= 2")

    sw = merged["sweep"]
    metric = sw.get("metric")
    _require(metric in METRICS, f"sweep.metric must be one of {METRICS}")
    if metric == "euclidean":
        _require(mode != "swap_test", "the euclidean metric needs signed overlaps (exact or hadamard_test)")
    _require("grid" in sw, "missing sweep.grid")
    grid = _grid(sw["grid"])
    r_max = _number(sw, "r_max", int, "sweep.")
    _require(r_max >= 1, "sweep.r_max must be >= 1")
    snap = bool(sw.get("snap", True))

    cl = merged["classify"]
    p_min = _number(cl, "p_min", where="classify.")
    v_min = _number(cl, "v_min", where="classify.")
    _require(0 < p_min <= 1, "classify.p_min must lie in (0, 1]")
    _require(v_min >= 0, "classify.v_min must be >= 0")

    est = merged["estimator"]
    estimator = None
    if est.get("enabled", False):
        e_eps = _number(est, "eps", where="estimator.")
        e_eta = _number(est, "eta", where="estimator.")
        _require(0 < e_eps < 1 and 0 < e_eta < 1, "estimator eps and eta must lie in (0, 1)")
        estimator = (e_eps, e_eta)

    out_dir = merged["output"].get("dir")
    if out_dir is not None:
        out_dir = Path(out_dir)
        if base_dir is not None and not out_dir.is_absolute():
            out_dir = base_dir / out_dir

    return PipelineConfig(
        system, x0, scheme, t_end, n_steps, n_nodes, m, times, mode, shots, seed, metric, grid, snap,
        r_max, p_min, v_min, estimator, out_dir, preset_name,
    )


def load_config(path) -> PipelineConfig:
    path = Path(path)
    return resolve(load_raw(path), path.parent)


def preset_config(name: str) -> PipelineConfig:
    return resolve({"preset": name})
