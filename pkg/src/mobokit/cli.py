"""Command-line front end: manifest-driven experiment execution and
bit-stable CSV artifacts.

Artifacts per mode directory:
  trace_<k>.csv    one row per evaluated point (iter 0 = initial design),
                   columns iter, x_*, mean_*, std_*, w_*, hv, flags
  timings_<k>.csv  wall-clock sidecar (excluded from the determinism
                   guarantee, which is why it is not part of the trace file)
  front_<k>.csv    final observed Pareto front with per-objective stds
  aggregate.csv    per-iteration mean/std of hypervolume across macro-reps

All floats are serialized with 17 significant digits (exact round-trip for
64-bit values).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .acquisition import PsoConfig
from .gp import GpConfig
from .optimizer import (MODES, ExternalSpec, MacroResult, RunConfig, RunResult,
                        run_macro)
from .pareto import hypervolume_2d, nondominated_sort
from .problems import ANCHOR_SAMPLES, WFG4_K, make_problem
from .tpe import TpeConfig

__all__ = ["main", "ManifestError", "Manifest", "load_manifest", "cmd_run",
           "cmd_hv", "cmd_pareto"]

ENV_OUT_ROOT = "MOBOKIT_OUT"


class ManifestError(ValueError):
    """Invalid or missing manifest field; message names the field."""


class CsvFormatError(ValueError):
    """Malformed CSV input; message carries the line number."""


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


# ---------------------------------------------------------------------------
# manifest handling
# ---------------------------------------------------------------------------


@dataclass
class Manifest:
    modes: list[str]
    n_macro: int
    jobs: int
    out: str | None
    base: RunConfig  # mode field is replaced per entry of `modes`


def _take(data: dict, key, default=None):
    return data[key] if key in data else default


def _sub_config(data: dict, key: str, cls, **extra):
    section = dict(_take(data, key, {}) or {})
    section.update(extra)
    try:
        return cls(**{k: tuple(v) if isinstance(v, list) else v
                      for k, v in section.items()})
    except TypeError as exc:
        raise ManifestError(f"{key}: {exc}") from None


def load_manifest(path: str | Path) -> dict:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ManifestError(f"manifest not found: {path}") from None
    except yaml.YAMLError as exc:
        raise ManifestError(f"manifest is not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a mapping of keys to values")
    return data


def build_manifest(data: dict, overrides: dict | None = None) -> Manifest:
    overrides = overrides or {}
    modes = _take(data, "modes", _take(data, "mode", "gp_motpe"))
    if "mode" in overrides and overrides["mode"] is not None:
        modes = overrides["mode"]
    if isinstance(modes, str):
        modes = [modes]
    for mode in modes:
        if mode not in MODES:
            raise ManifestError(f"mode: {mode!r} is not one of {MODES}")

    external = None
    if "external" in data and data["external"] is not None:
        ext = data["external"]
        for req in ("command", "m", "dims"):
            if req not in ext:
                raise ManifestError(f"external.{req}: required")
        dims = tuple(
            (d["name"], d.get("kind", "continuous"), float(d["lower"]), float(d["upper"]))
            for d in ext["dims"]
        )
        external = ExternalSpec(ext["command"], int(ext["m"]), dims,
                                float(ext.get("timeout", 3600.0)))

    seed = overrides.get("seed")
    if seed is None:
        seed = _take(data, "seed", 0)

    kwargs = dict(
        mode=modes[0],
        problem=_take(data, "problem", "zdt1"),
        d=int(_take(data, "d", 5)),
        iterations=int(_take(data, "iterations", 100)),
        replications=_take(data, "replications"),
        init_size=_take(data, "init_size"),
        gamma=float(_take(data, "gamma", 0.3)),
        n_c=int(_take(data, "n_c", 1000)),
        seed=int(seed),
        rho=float(_take(data, "rho", 0.05)),
        external=external,
        gp=_sub_config(data, "gp", GpConfig),
        pso=_sub_config(data, "pso", PsoConfig),
        tpe=_sub_config(data, "tpe", TpeConfig),
    )
    ref = _take(data, "reference_point")
    if ref is not None:
        kwargs["reference_point"] = tuple(float(v) for v in ref)
    fracs = _take(data, "noise_fracs")
    if fracs is not None:
        kwargs["noise_fracs"] = tuple(float(v) for v in fracs)
    try:
        base = RunConfig(**kwargs).resolved()
    except (ValueError, KeyError) as exc:
        raise ManifestError(str(exc)) from None

    return Manifest(
        modes=list(modes),
        n_macro=int(_take(data, "n_macro", 1)),
        jobs=int(overrides.get("jobs") or _take(data, "jobs", 1)),
        out=overrides.get("out") or _take(data, "out"),
        base=base,
    )


def _noise_metadata(config: RunConfig) -> dict:
    if config.is_external:
        return {"noise_anchors": None, "anchor_digest": None}
    problem = make_problem(config.problem, config.d)
    digest = hashlib.sha256(problem.f_min.tobytes() + problem.f_max.tobytes())
    return {
        "noise_anchors": {
            "f_min": [float(v) for v in problem.f_min],
            "f_max": [float(v) for v in problem.f_max],
        },
        "anchor_digest": digest.hexdigest(),
        "anchor_samples": ANCHOR_SAMPLES,
    }


def resolved_manifest_dict(manifest: Manifest) -> dict:
    cfg = manifest.base
    out = {
        "tool": f"mobokit {__version__}",
        "modes": manifest.modes,
        "n_macro": manifest.n_macro,
        "jobs": manifest.jobs,
        "problem": cfg.problem,
        "d": cfg.d,
        "iterations": cfg.iterations,
        "replications": cfg.replications,
        "init_size": cfg.init_size,
        "gamma": cfg.gamma,
        "n_c": cfg.n_c,
        "seed": cfg.seed,
        "rho": cfg.rho,
        "reference_point": list(cfg.reference_point),
        "noise_fracs": list(cfg.noise_fracs),
        "gp": {k: (list(v) if isinstance(v, tuple) else v)
               for k, v in asdict(cfg.gp).items()},
        "pso": asdict(cfg.pso),
        "tpe": asdict(cfg.tpe),
        "external": asdict(cfg.external) if cfg.external else None,
        "metadata": {
            "wfg4_k": WFG4_K,
            "wfg4_l": (cfg.d - WFG4_K) if cfg.problem == "wfg4" else None,
            "float_format": ".17g",
            **_noise_metadata(cfg),
        },
    }
    return out


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------


def write_trace_csv(path: Path, result: RunResult):
    d = result.archive.space.d
    m = result.archive.m
    header = (["iter"] + [f"x_{i+1}" for i in range(d)]
              + [f"mean_{j+1}" for j in range(m)] + [f"std_{j+1}" for j in range(m)]
              + [f"w_{j+1}" for j in range(m)] + ["hv", "flags"])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for rec in result.archive.records[:result.n_init_records]:
            row = (["0"] + [_fmt(v) for v in rec.point]
                   + [_fmt(v) for v in rec.sample_mean]
                   + [_fmt(v) for v in np.sqrt(rec.sample_var)]
                   + [""] * m + [_fmt(result.init_hv), "init"])
            w.writerow(row)
        for tr in result.traces:
            row = ([str(tr.iteration)] + [_fmt(v) for v in tr.point]
                   + [_fmt(v) for v in tr.mean] + [_fmt(v) for v in tr.std]
                   + [_fmt(v) for v in tr.weights]
                   + [_fmt(tr.hv), ";".join(tr.flags)])
            w.writerow(row)


def write_timings_csv(path: Path, result: RunResult):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iter", "wall_ms"])
        for tr in result.traces:
            w.writerow([str(tr.iteration), _fmt(tr.wall_ms)])


def write_front_csv(path: Path, points: np.ndarray, means: np.ndarray,
                    stds: np.ndarray):
    d = points.shape[1] if points.size else 0
    m = means.shape[1] if means.size else 2
    header = ([f"x_{i+1}" for i in range(d)]
              + [f"mean_{j+1}" for j in range(m)] + [f"std_{j+1}" for j in range(m)])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for x, mu, sd in zip(points, means, stds):
            w.writerow([_fmt(v) for v in x] + [_fmt(v) for v in mu]
                       + [_fmt(v) for v in sd])


def write_aggregate_csv(path: Path, macro: MacroResult):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iter", "hv_mean", "hv_std"])
        for i, (mu, sd) in enumerate(zip(macro.hv_mean, macro.hv_std)):
            w.writerow([str(i), _fmt(mu), _fmt(sd)])


def _read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except FileNotFoundError:
        raise CsvFormatError(f"{path}: file not found") from None
    if not rows:
        raise CsvFormatError(f"{path}: empty file (missing header)")
    return rows[0], rows[1:]


def _columns(header: list[str], prefix: str) -> list[int]:
    idx = []
    k = 1
    while f"{prefix}_{k}" in header:
        idx.append(header.index(f"{prefix}_{k}"))
        k += 1
    return idx


def _parse_floats(row: list[str], cols: list[int], lineno: int, path) -> list[float]:
    try:
        return [float(row[c]) for c in cols]
    except (ValueError, IndexError) as exc:
        raise CsvFormatError(f"{path}:{lineno}: {exc}") from None


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_run(args) -> int:
    manifest = build_manifest(load_manifest(args.manifest), {
        "mode": args.mode, "seed": args.seed, "out": args.out, "jobs": args.jobs,
    })
    out_dir = manifest.out
    if out_dir is None:
        root = os.environ.get(ENV_OUT_ROOT, "runs")
        out_dir = str(Path(root) / Path(args.manifest).stem)
    out = Path(out_dir)
    marker = out / "manifest_resolved.yaml"
    if marker.exists() and not args.force:
        print(f"error: {out} already holds results (use --force to overwrite)",
              file=sys.stderr)
        return 2
    out.mkdir(parents=True, exist_ok=True)
    with open(marker, "w") as fh:
        yaml.safe_dump(resolved_manifest_dict(manifest), fh, sort_keys=True)

    exit_code = 0
    for mode in manifest.modes:
        mode_dir = out / mode
        mode_dir.mkdir(exist_ok=True)
        config = RunConfig(**{**asdict_shallow(manifest.base), "mode": mode})
        macro = run_macro(config, manifest.n_macro, manifest.jobs)
        for k, result in enumerate(macro.results):
            write_trace_csv(mode_dir / f"trace_{k}.csv", result)
            write_timings_csv(mode_dir / f"timings_{k}.csv", result)
            if len(result.archive):
                entries = _front_of_result(result)
                write_front_csv(mode_dir / f"front_{k}.csv", *entries)
            if result.aborted:
                print(f"warning: {mode} macro-rep {k} aborted: {result.abort_reason}",
                      file=sys.stderr)
                exit_code = 1
        write_aggregate_csv(mode_dir / "aggregate.csv", macro)
        print(f"{mode}: {manifest.n_macro} run(s) -> {mode_dir}")
    return exit_code


def asdict_shallow(config: RunConfig) -> dict:
    # keep nested configs as dataclass instances (asdict would dict-ify them)
    return {f: getattr(config, f) for f in config.__dataclass_fields__}


def _front_of_result(result: RunResult):
    from .pareto import pareto_front

    entries = pareto_front(result.archive)
    return (np.array([e.point for e in entries]),
            np.array([e.mean for e in entries]),
            np.array([e.std for e in entries]))


def cmd_hv(args) -> int:
    header, rows = _read_csv(args.front)
    mean_cols = _columns(header, "mean")
    if len(mean_cols) != 2:
        raise CsvFormatError(
            f"{args.front}:1: need exactly mean_1 and mean_2 columns, "
            f"found {len(mean_cols)}")
    pts = np.array([_parse_floats(r, mean_cols, i + 2, args.front)
                    for i, r in enumerate(rows)])
    print(_fmt(hypervolume_2d(pts.reshape(-1, 2), np.asarray(args.ref, dtype=float))))
    return 0


def cmd_pareto(args) -> int:
    header, rows = _read_csv(args.trace)
    x_cols = _columns(header, "x")
    mean_cols = _columns(header, "mean")
    std_cols = _columns(header, "std")
    for name, cols in (("x", x_cols), ("mean", mean_cols), ("std", std_cols)):
        if not cols:
            raise CsvFormatError(f"{args.trace}:1: missing {name}_* columns")
    seen: dict[tuple, tuple] = {}
    for i, row in enumerate(rows):
        x = tuple(_parse_floats(row, x_cols, i + 2, args.trace))
        mu = _parse_floats(row, mean_cols, i + 2, args.trace)
        sd = _parse_floats(row, std_cols, i + 2, args.trace)
        seen[x] = (mu, sd)  # duplicates keep the latest (pooled) moments
    pts = np.array([list(x) for x in seen])
    means = np.array([v[0] for v in seen.values()])
    stds = np.array([v[1] for v in seen.values()])
    front0 = nondominated_sort(means).fronts[0]
    write_front_csv(Path(args.out), pts[front0], means[front0], stds[front0])
    print(f"{front0.size} nondominated point(s) -> {args.out}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mobokit",
        description="Multi-objective Bayesian optimization under noise",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an experiment manifest")
    p_run.add_argument("--manifest", required=True)
    p_run.add_argument("--mode", choices=MODES, help="override the manifest mode list")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--jobs", type=int)
    p_run.add_argument("--out")
    p_run.add_argument("--force", action="store_true")
    p_run.set_defaults(func=cmd_run)

    p_hv = sub.add_parser("hv", help="hypervolume of a front CSV")
    p_hv.add_argument("front")
    p_hv.add_argument("--ref", type=float, nargs=2, required=True)
    p_hv.set_defaults(func=cmd_hv)

    p_par = sub.add_parser("pareto", help="extract the nondominated front of a trace CSV")
    p_par.add_argument("trace")
    p_par.add_argument("--out", required=True)
    p_par.set_defaults(func=cmd_pareto)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ManifestError, CsvFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
