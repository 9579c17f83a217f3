"""Noisy bi-objective benchmark problems and the external-evaluator bridge.

The three built-ins (zdt1, wfg4, dtlz7) are deterministic textbook functions
wrapped by a heteroscedastic Gaussian noise model whose standard deviation
decreases linearly from 0.5 * range at the best objective value to
0.01 * range at the worst.
"""

from __future__ import annotations

import shlex
import subprocess
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import RngStream, SearchSpace

__all__ = [
    "Problem",
    "NoiseModel",
    "EvaluationError",
    "ExternalEvaluator",
    "make_problem",
    "eval_deterministic",
    "noise_std",
    "eval_noisy",
    "BUILTIN_PROBLEMS",
    "DEFAULT_REFERENCE_POINTS",
    "ANCHOR_SAMPLES",
]

# Reference points used for hypervolume reporting on the built-ins.
DEFAULT_REFERENCE_POINTS = {
    "zdt1": (1.0, 10.0),
    "wfg4": (3.0, 5.0),
    "dtlz7": (1.0, 23.0),
}

# Objective ranges are estimated once by dense uniform sampling with a fixed
# internal seed, so the noise line is identical across runs and platforms.
ANCHOR_SAMPLES = 1_000_000
_ANCHOR_SEED = 771_020_305
_ANCHOR_STREAM = {"zdt1": 1, "wfg4": 2, "dtlz7": 3}

WFG4_K = 4  # position parameters; distance parameters l = d - k


@dataclass(frozen=True)
class Problem:
    """A deterministic multi-objective test function with box bounds and the
    cached per-objective (min, max) anchors of its objective ranges."""

    name: str
    d: int
    m: int
    space: SearchSpace
    f_min: np.ndarray  # per-objective minimum over the domain (estimated)
    f_max: np.ndarray  # per-objective maximum over the domain (estimated)
    _evaluate: Callable[[np.ndarray], np.ndarray]

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        """Deterministic objectives for a batch of rows (no bound checks)."""
        return self._evaluate(np.atleast_2d(np.asarray(X, dtype=float)))

    @property
    def omega(self) -> np.ndarray:
        return self.f_max - self.f_min


# ---------------------------------------------------------------------------
# deterministic test functions (batch evaluators over rows)
# ---------------------------------------------------------------------------


def _zdt1(X: np.ndarray) -> np.ndarray:
    f1 = X[:, 0]
    g = 1.0 + 9.0 * X[:, 1:].mean(axis=1)
    f2 = g * (1.0 - np.sqrt(f1 / g))
    return np.column_stack([f1, f2])


def _dtlz7(X: np.ndarray) -> np.ndarray:
    # bi-objective form: one position variable, d-1 distance variables
    f1 = X[:, 0]
    g = 1.0 + 9.0 * X[:, 1:].mean(axis=1)
    h = 2.0 - f1 / (1.0 + g) * (1.0 + np.sin(3.0 * np.pi * f1))
    f2 = (1.0 + g) * h
    return np.column_stack([f1, f2])


def _clip01(y: np.ndarray) -> np.ndarray:
    return np.clip(y, 0.0, 1.0)


def _wfg_s_multi(y: np.ndarray, A: float, B: float, C: float) -> np.ndarray:
    t = np.abs(y - C) / (2.0 * (np.floor(C - y) + C))
    return _clip01((1.0 + np.cos((4.0 * A + 2.0) * np.pi * (0.5 - t))
                    + 4.0 * B * t * t) / (B + 2.0))


def _make_wfg4(d: int) -> Callable[[np.ndarray], np.ndarray]:
    k = WFG4_K
    if d <= k:
        raise ValueError(f"wfg4 needs d > {k} (got d={d})")
    scale = 2.0 * np.arange(1, d + 1)

    def evaluate(X: np.ndarray) -> np.ndarray:
        y = X / scale
        y = _wfg_s_multi(y, 30.0, 10.0, 0.35)
        u1 = _clip01(y[:, :k].mean(axis=1))
        u2 = _clip01(y[:, k:].mean(axis=1))
        # degeneracy constant A=1 makes the first underlying parameter u1
        x1 = u1
        f1 = u2 + 2.0 * _clip01(np.sin(0.5 * np.pi * x1))
        f2 = u2 + 4.0 * _clip01(np.cos(0.5 * np.pi * x1))
        return np.column_stack([f1, f2])

    return evaluate


def _unit_space(d: int) -> SearchSpace:
    return SearchSpace.continuous(np.zeros(d), np.ones(d))


def _wfg_space(d: int) -> SearchSpace:
    return SearchSpace.continuous(np.zeros(d), 2.0 * np.arange(1, d + 1))


BUILTIN_PROBLEMS = {
    "zdt1": (_unit_space, lambda d: _zdt1),
    "wfg4": (_wfg_space, _make_wfg4),
    "dtlz7": (_unit_space, lambda d: _dtlz7),
}

_anchor_cache: dict[tuple[str, int], tuple[np.ndarray, np.ndarray]] = {}


def _estimate_anchors(name: str, space: SearchSpace,
                      evaluate: Callable) -> tuple[np.ndarray, np.ndarray]:
    key = (name, space.d)
    if key not in _anchor_cache:
        gen = RngStream(_ANCHOR_SEED, _ANCHOR_STREAM[name]).generator()
        f_min = None
        f_max = None
        # chunked to keep memory flat at ~40 MB
        remaining = ANCHOR_SAMPLES
        while remaining > 0:
            n = min(remaining, 250_000)
            U = gen.uniform(size=(n, space.d))
            F = evaluate(space.lower + U * (space.upper - space.lower))
            lo = F.min(axis=0)
            hi = F.max(axis=0)
            f_min = lo if f_min is None else np.minimum(f_min, lo)
            f_max = hi if f_max is None else np.maximum(f_max, hi)
            remaining -= n
        _anchor_cache[key] = (f_min, f_max)
    return _anchor_cache[key]


def make_problem(name: str, d: int = 5) -> Problem:
    """Instantiate a built-in problem with cached objective-range anchors."""
    try:
        space_fn, eval_fn = BUILTIN_PROBLEMS[name]
    except KeyError:
        raise ValueError(
            f"unknown problem {name!r}; choose from {sorted(BUILTIN_PROBLEMS)}"
        ) from None
    space = space_fn(d)
    evaluate = eval_fn(d)
    f_min, f_max = _estimate_anchors(name, space, evaluate)
    return Problem(name, d, 2, space, f_min, f_max, evaluate)


def eval_deterministic(problem: Problem, point: np.ndarray) -> np.ndarray:
    """Textbook objective values at one in-bounds point."""
    x = problem.space.check_point(point)
    return problem.evaluate(x[None, :])[0]


# ---------------------------------------------------------------------------
# heteroscedastic noise
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoiseModel:
    """Linear noise line tau_j(x) = a_j * (f_j(x) + b_j), clamped to the
    [tau_min_frac, tau_max_frac] * range band."""

    a: np.ndarray
    b: np.ndarray
    tau_lo: np.ndarray  # absolute clamp = tau_min_frac * omega
    tau_hi: np.ndarray  # absolute clamp = tau_max_frac * omega
    tau_min_frac: float = 0.01
    tau_max_frac: float = 0.5

    @classmethod
    def for_problem(cls, problem: Problem, tau_min_frac: float = 0.01,
                    tau_max_frac: float = 0.5) -> "NoiseModel":
        omega = problem.omega
        # tau equals tau_max_frac*omega at the objective minimum and
        # tau_min_frac*omega at the maximum; linear in between.
        a = np.full(problem.m, tau_min_frac - tau_max_frac)
        b = tau_max_frac * omega / a - problem.f_min
        return cls(a, b, tau_min_frac * omega, tau_max_frac * omega,
                   tau_min_frac, tau_max_frac)

    @classmethod
    def zero(cls, m: int) -> "NoiseModel":
        """Degenerate noiseless model (testing hook)."""
        z = np.zeros(m)
        return cls(z, z, z, z, 0.0, 0.0)


def noise_std(model: NoiseModel, f_values: np.ndarray) -> np.ndarray:
    """Noise standard deviation at the given objective values."""
    f = np.asarray(f_values, dtype=float)
    return np.clip(model.a * (f + model.b), model.tau_lo, model.tau_hi)


def eval_noisy(problem: Problem, model: NoiseModel, point: np.ndarray,
               r: int, rng: RngStream) -> np.ndarray:
    """r independent noisy replications f_j + N(0, tau_j^2) at one point."""
    if r < 1:
        raise ValueError("need at least one replication")
    f = eval_deterministic(problem, point)
    tau = noise_std(model, f)
    gen = rng.generator()
    return f + gen.standard_normal((r, problem.m)) * tau


# ---------------------------------------------------------------------------
# external evaluator (line protocol over a subprocess)
# ---------------------------------------------------------------------------


class EvaluationError(RuntimeError):
    """External evaluation failed; message echoes the offending point."""


@dataclass(frozen=True)
class ExternalEvaluator:
    """Bridges to a user command speaking a line-delimited text protocol.

    Request (stdin): one line "x_1 x_2 ... x_d r". Response (stdout): r lines
    of m objective values each, all in minimization orientation. Nonzero exit,
    timeouts and malformed responses raise EvaluationError.
    """

    command: str
    m: int
    timeout: float = 3600.0

    def evaluate(self, point: np.ndarray, r: int) -> np.ndarray:
        point = np.asarray(point, dtype=float)
        request = " ".join(f"{v:.17g}" for v in point) + f" {r}\n"
        try:
            proc = subprocess.run(
                shlex.split(self.command), input=request, capture_output=True,
                text=True, timeout=self.timeout,
            )
        except subprocess.TimeoutExpired as exc:
            raise EvaluationError(f"evaluator timed out at point {point.tolist()}") from exc
        if proc.returncode != 0:
            raise EvaluationError(
                f"evaluator exited with {proc.returncode} at point {point.tolist()}: "
                f"{proc.stderr.strip()}"
            )
        lines = [ln for ln in proc.stdout.splitlines() if ln.strip()]
        if len(lines) != r:
            raise EvaluationError(
                f"expected {r} response lines at point {point.tolist()}, got {len(lines)}"
            )
        try:
            reps = np.array([[float(v) for v in ln.split()] for ln in lines])
        except ValueError as exc:
            raise EvaluationError(
                f"malformed response at point {point.tolist()}: {exc}"
            ) from exc
        if reps.shape != (r, self.m):
            raise EvaluationError(
                f"expected {r}x{self.m} objective values at point {point.tolist()}, "
                f"got shape {reps.shape}"
            )
        return reps
