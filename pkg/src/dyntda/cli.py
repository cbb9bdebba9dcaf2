"""Command line entry point: ``dyntda run <config|preset>`` and ``dyntda presets``."""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import io
from .config import load_config, preset_config
from .errors import ConfigError, DynTDAError
from .pipeline import run_pipeline, write_outputs
from .presets import PRESETS, list_presets

OUT_DIR_ENV = "DYNTDA_OUT_DIR"
DEFAULT_OUT_DIR = "dyntda-out"


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dyntda", description="Topological signatures of ODE trajectories.")
    sub = p.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the pipeline on a TOML config or a preset name")
    run.add_argument("config", help="path to a TOML config, or a preset name")
    run.add_argument("--seed", type=int, help="override overlap.seed")
    run.add_argument("--out-dir", help=f"output directory (default: ${OUT_DIR_ENV} or ./{DEFAULT_OUT_DIR})")
    run.add_argument("--exact", action="store_true", help="force exact overlaps (shots = 0)")
    run.add_argument("--format", choices=("json", "csv"), default="json", help="summary printed to stdout")
    pre = sub.add_parser("presets", help="list built-in systems")
    pre.add_argument("--format", choices=("json", "csv"), default="json")
    return p


def _load(target: str):
    path = Path(target)
    if path.exists():
        return load_config(path)
    if target in PRESETS:
        return preset_config(target)
    raise ConfigError(f"no config file or preset named {target!r}")


def _apply_flags(cfg, args):
    changes = {}
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be a 64-bit unsigned integer")
        changes["seed"] = args.seed
    if args.exact:
        changes.update(mode="exact", shots=0)
    if args.out_dir is not None:
        changes["out_dir"] = Path(args.out_dir)
    elif cfg.out_dir is None:
        changes["out_dir"] = Path(os.environ.get(OUT_DIR_ENV) or DEFAULT_OUT_DIR)
    return dataclasses.replace(cfg, **changes)


def _summary(result, out_dir: Path, fmt: str) -> str:
    sig = result.signature
    if fmt == "csv":
        ev = sig.evidence
        return "label,torus_fraction,loop_fraction,variation,out_dir\n" + (
            f"{sig.label},{io.fmt(ev['torus_fraction'])},{io.fmt(ev['loop_fraction'])},"
            f"{io.fmt(ev['variation'])},{out_dir}\n"
        )
    return io.dumps({"label": sig.label, "evidence": sig.evidence, "out_dir": str(out_dir)})


def _presets(fmt: str) -> str:
    rows = [{"name": p.name, "form": p.form, "provenance": p.provenance} for p in list_presets()]
    if fmt == "csv":
        out = ["name,form,provenance"]
        out += [",".join(json.dumps(r[k]) if "," in r[k] else r[k] for k in ("name", "form", "provenance"))
                for r in rows]
        return "\n".join(out) + "\n"
    return io.dumps(rows)


def _error(exc: DynTDAError, code: int) -> int:
    sys.stderr.write(json.dumps(exc.to_dict(), sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "presets":
        sys.stdout.write(_presets(args.format))
        return 0
    try:
        cfg = _apply_flags(_load(args.config), args)
    except ConfigError as exc:
        return _error(exc, 2)
    try:
        result = run_pipeline(cfg)
        write_outputs(result, cfg.out_dir)
    except DynTDAError as exc:
        return _error(exc, 1)
    except OSError as exc:
        return _error(DynTDAError(f"cannot write outputs: {exc}"), 1)
    sys.stdout.write(_summary(result, cfg.out_dir, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
