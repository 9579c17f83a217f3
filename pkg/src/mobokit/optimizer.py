"""The sequential optimization loop in four modes (gp_motpe, gp, motpe,
random) plus macro-replication orchestration."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .acquisition import (PsoConfig, build_mei_context, select_infill_gp_motpe,
                          select_infill_gp_pso)
from .core import Archive, RngStream, SearchSpace, sample_uniform
from .doe import default_init_size, latin_hypercube, random_design
from .gp import GpConfig, GpFitError, fit
from .pareto import hypervolume_2d, nondominated_sort, split_gamma
from .problems import (DEFAULT_REFERENCE_POINTS, ExternalEvaluator, NoiseModel,
                       Problem, eval_noisy, make_problem)
from .scalarize import DEFAULT_RHO, build_scalarized_dataset, draw_weights
from .tpe import TpeConfig, build_density_pair, motpe_select

__all__ = ["MODES", "ExternalSpec", "RunConfig", "IterationTrace", "RunResult",
           "MacroResult", "run", "run_macro", "hv_series"]

log = logging.getLogger(__name__)

MODES = ("gp_motpe", "gp", "motpe", "random")

DEFAULT_REPLICATIONS_ANALYTICAL = 50
DEFAULT_REPLICATIONS_EXTERNAL = 10


@dataclass(frozen=True)
class ExternalSpec:
    """Configuration of the external-evaluator path."""

    command: str
    m: int
    dims: tuple[tuple[str, str, float, float], ...]  # (name, kind, lower, upper)
    timeout: float = 3600.0

    def space(self) -> SearchSpace:
        from .core import DimensionSpec

        return SearchSpace(tuple(DimensionSpec(*dim) for dim in self.dims))


@dataclass(frozen=True)
class RunConfig:
    mode: str = "gp_motpe"
    problem: str = "zdt1"
    d: int = 5
    iterations: int = 100
    replications: int | None = None  # 50 analytical / 10 external when unset
    init_size: int | None = None  # 11d - 1 when unset
    gamma: float = 0.3
    n_c: int = 1000
    seed: int = 0
    reference_point: tuple[float, float] | None = None
    rho: float = DEFAULT_RHO
    noise_fracs: tuple[float, float] = (0.01, 0.5)
    gp: GpConfig = field(default_factory=GpConfig)
    pso: PsoConfig = field(default_factory=PsoConfig)
    tpe: TpeConfig = field(default_factory=TpeConfig)
    external: ExternalSpec | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.replications is not None and self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if self.problem == "external" and self.external is None:
            raise ValueError("problem 'external' needs an external spec")

    @property
    def is_external(self) -> bool:
        return self.problem == "external"

    def resolved(self) -> "RunConfig":
        """Fill every unset default so the config can be persisted verbatim."""
        reps = self.replications
        if reps is None:
            reps = (DEFAULT_REPLICATIONS_EXTERNAL if self.is_external
                    else DEFAULT_REPLICATIONS_ANALYTICAL)
        d = self.external.space().d if self.is_external else self.d
        init = self.init_size if self.init_size is not None else default_init_size(d)
        ref = self.reference_point
        if ref is None:
            if self.is_external:
                raise ValueError("external runs need an explicit reference_point")
            ref = DEFAULT_REFERENCE_POINTS[self.problem]
        return replace(self, replications=reps, init_size=init, d=d,
                       reference_point=tuple(float(v) for v in ref))


@dataclass
class IterationTrace:
    iteration: int
    point: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    weights: np.ndarray
    hv: float
    wall_ms: float
    flags: tuple[str, ...] = ()


@dataclass
class RunResult:
    config: RunConfig
    traces: list[IterationTrace]
    archive: Archive
    init_hv: float
    n_init_records: int = 0
    aborted: bool = False
    abort_reason: str = ""


@dataclass
class MacroResult:
    results: list[RunResult]
    hv_mean: np.ndarray  # (iterations + 1,), index 0 = initial design
    hv_std: np.ndarray


def hv_series(result: RunResult) -> np.ndarray:
    return np.array([result.init_hv] + [t.hv for t in result.traces])


def _escalated(cfg: GpConfig) -> GpConfig:
    return replace(cfg, jitter_ladder=tuple(cfg.jitter_ladder) + (1e-5, 1e-4))


class _Evaluator:
    """Uniform evaluation front-end over the analytical and external paths."""

    def __init__(self, config: RunConfig):
        if config.is_external:
            self.problem: Problem | None = None
            self.space = config.external.space()
            self.m = config.external.m
            self._external = ExternalEvaluator(
                config.external.command, config.external.m, config.external.timeout
            )
            self.noise = None
        else:
            self.problem = make_problem(config.problem, config.d)
            self.space = self.problem.space
            self.m = self.problem.m
            self._external = None
            lo_frac, hi_frac = config.noise_fracs
            self.noise = NoiseModel.for_problem(self.problem, lo_frac, hi_frac)

    def evaluate(self, point: np.ndarray, r: int, rng: RngStream) -> np.ndarray:
        if self._external is not None:
            return self._external.evaluate(self.space.round_integers(point), r)
        return eval_noisy(self.problem, self.noise, point, r, rng)


def _current_hv(archive: Archive, ref) -> float:
    return hypervolume_2d(archive.means(), np.asarray(ref, dtype=float))


def run(config: RunConfig, rng: RngStream | None = None) -> RunResult:
    """Execute one optimization run: initial design with full replications,
    then exactly `iterations` infill evaluations, tracing hypervolume after
    each archive update."""
    config = config.resolved()
    ev = _Evaluator(config)
    space, m = ev.space, ev.m
    ref = np.asarray(config.reference_point, dtype=float)
    rng = rng if rng is not None else RngStream(config.seed)

    design = (random_design(space, config.init_size, rng.child(1)) if config.is_external
              else latin_hypercube(space, config.init_size, rng.child(1)))
    archive = Archive(space, m)
    init_noise = rng.child(2)
    for i, pt in enumerate(design.points):
        archive.merge(pt, ev.evaluate(pt, config.replications, init_noise.child(i)))
    init_hv = _current_hv(archive, ref)

    traces: list[IterationTrace] = []
    result = RunResult(config, traces, archive, init_hv,
                       n_init_records=len(archive))
    warm_start = None
    needs_gp = config.mode in ("gp", "gp_motpe")
    needs_split = config.mode in ("motpe", "gp_motpe")

    for t in range(1, config.iterations + 1):
        rng_t = rng.child(3).child(t)
        t0 = time.perf_counter()
        flags: list[str] = []

        wv = draw_weights(m, rng_t.child(0), config.rho)

        ctx = None
        if needs_gp:
            dataset = build_scalarized_dataset(archive, wv)
            try:
                model = fit(dataset, space, config.gp, rng_t.child(1), warm_start)
            except GpFitError:
                flags.append("gp_retry")
                try:
                    model = fit(dataset, space, _escalated(config.gp),
                                rng_t.child(1), warm_start)
                except GpFitError as exc:
                    result.aborted = True
                    result.abort_reason = f"iteration {t}: {exc}"
                    log.error("run aborted at iteration %d: %s", t, exc)
                    return result
            warm_start = np.concatenate([np.log(model.theta),
                                         [math.log(model.sigma2)]])
            ctx = build_mei_context(model, dataset)

        pair = None
        if needs_split:
            means = archive.means()
            partition = nondominated_sort(means)
            split = split_gamma(partition, means, config.gamma, ref)
            pair = build_density_pair(archive, split, space, config.tpe)

        if config.mode == "gp_motpe":
            point, fallback = select_infill_gp_motpe(ctx, pair, config.n_c,
                                                     rng_t.child(2))
            if fallback:
                flags.append("as_fallback")
                log.info("iteration %d: empty positive-score set, used max-AS candidate", t)
        elif config.mode == "gp":
            point = select_infill_gp_pso(ctx, space, config.pso, rng_t.child(2))
        elif config.mode == "motpe":
            point = motpe_select(pair, config.n_c, rng_t.child(2))
        else:
            point = sample_uniform(space, rng_t.child(2))

        reps = ev.evaluate(point, config.replications, rng_t.child(3))
        pooled = archive.merge(point, reps)
        if pooled:
            flags.append("duplicate_merge")
            log.warning("iteration %d: infill point duplicates an archive point", t)
        rec = archive.records[archive.find(point)]
        traces.append(IterationTrace(
            iteration=t,
            point=np.asarray(point, dtype=float),
            mean=rec.sample_mean.copy(),
            std=np.sqrt(rec.sample_var),
            weights=wv.w.copy(),
            hv=_current_hv(archive, ref),
            wall_ms=(time.perf_counter() - t0) * 1e3,
            flags=tuple(flags),
        ))
    return result


def _macro_rep(args: tuple[RunConfig, int]) -> RunResult:
    config, k = args
    return run(config, RngStream(config.seed).child(k))


def run_macro(config: RunConfig, n_macro: int, jobs: int = 1) -> MacroResult:
    """Run n_macro independent replications of the experiment on derived
    sub-streams of the master seed; aggregates the hypervolume traces of the
    completed runs."""
    if n_macro < 1:
        raise ValueError("n_macro must be >= 1")
    config = config.resolved()
    work = [(config, k) for k in range(n_macro)]
    if jobs > 1 and n_macro > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, n_macro)) as pool:
            results = list(pool.map(_macro_rep, work))
    else:
        results = [_macro_rep(w) for w in work]

    completed = [r for r in results if not r.aborted]
    if len(completed) < len(results):
        log.warning("%d of %d macro-replications aborted; aggregating the rest",
                    len(results) - len(completed), len(results))
    if completed:
        series = np.array([hv_series(r) for r in completed])
        hv_mean = series.mean(axis=0)
        hv_std = series.std(axis=0)
    else:
        hv_mean = np.empty(0)
        hv_std = np.empty(0)
    return MacroResult(results, hv_mean, hv_std)
