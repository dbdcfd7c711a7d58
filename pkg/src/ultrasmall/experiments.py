"""Monte Carlo harness: typical distances in giant components, degree-tail
exponents, distance-vs-loglog-N scaling fits, and empirical soundness
checks of the configuration-class bound.

Replicas run on independent derived seeds and are combined in a fixed
order, so results do not depend on the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds, models
from .errors import InputError, ParameterError
from .graph import CompactGraph, bfs_distances, components
from .models import ChungLu, ModelSpec
from .seeding import RngSeed, derive, generator

Z_ONE_SIDED_95 = 1.6448536269514722


@dataclass(frozen=True)
class DistanceSampleSet:
    """Distances of uniformly (with replacement) sampled giant-component
    pairs; v = w draws are retained and contribute distance 0."""

    n: int
    vs: np.ndarray
    ws: np.ndarray
    distances: np.ndarray  # -1 where unreached at the cutoff
    giant_size: int
    replica_seed: RngSeed
    model: ModelSpec | None = None

    @property
    def reached(self) -> np.ndarray:
        return self.distances[self.distances >= 0]

    def summary(self) -> dict:
        d = self.reached.astype(float)
        return {
            "pairs": int(self.distances.size),
            "unreached": int(np.sum(self.distances < 0)),
            "giant_size": self.giant_size,
            "mean": float(d.mean()) if d.size else math.nan,
            "median": float(np.median(d)) if d.size else math.nan,
            "q05": float(np.quantile(d, 0.05)) if d.size else math.nan,
            "q95": float(np.quantile(d, 0.95)) if d.size else math.nan,
        }


def sample_distances(
    g: CompactGraph,
    pairs: int,
    seed: RngSeed,
    cutoff: int | None = None,
    model: ModelSpec | None = None,
) -> DistanceSampleSet:
    """BFS distances between `pairs` uniform pairs of giant-component
    vertices (independent, with replacement)."""
    if g.n_vertices < 1:
        raise InputError("empty graph")
    if pairs < 1:
        raise ParameterError("pairs must be >= 1")
    comp = components(g)
    giant = comp.giant_vertices()
    rng = generator(seed, "pair-sampling")
    vs = giant[rng.integers(0, giant.size, pairs)]
    ws = giant[rng.integers(0, giant.size, pairs)]
    dist = bfs_distances(g, vs, ws, cutoff)
    return DistanceSampleSet(
        n=g.n_vertices, vs=vs, ws=ws, distances=dist,
        giant_size=int(giant.size), replica_seed=seed, model=model,
    )


# --- degree-tail estimation --------------------------------------------------


@dataclass(frozen=True)
class TailFit:
    tau_hat: float
    method: str
    k_top: int
    tau_ccdf: float | None = None  # log-log CCDF regression cross-check


def hill_tau(sample: np.ndarray, k_top: int) -> float:
    """Hill estimator on the k_top largest values:
    tau_hat = 1 + k_top / sum log(x_(i) / x_(k_top+1))."""
    x = np.sort(np.asarray(sample, dtype=float))[::-1]
    if k_top < 1 or k_top >= x.size:
        raise ParameterError("k_top must lie in [1, sample size)")
    ref = x[k_top]
    if ref <= 0:
        raise ParameterError("reference order statistic must be positive")
    logsum = float(np.sum(np.log(x[:k_top] / ref)))
    if logsum <= 0:
        raise ParameterError("zero spacings: sample too degenerate for a tail fit")
    return 1.0 + k_top / logsum


def ccdf_regression_tau(sample: np.ndarray, x_min: float) -> float | None:
    """Slope of log P{X > x} against log x over distinct values >= x_min;
    tau = 1 - slope. None when fewer than 3 distinct points."""
    x = np.asarray(sample, dtype=float)
    vals = np.unique(x[x >= max(x_min, 1.0)])[:-1]  # drop the max (CCDF 0)
    if vals.size < 3:
        return None
    surv = np.array([np.mean(x > v) for v in vals])
    slope = np.polyfit(np.log(vals), np.log(surv), 1)[0]
    return 1.0 - float(slope)


def estimate_tail(hist: dict, k_top: int | None = None) -> TailFit:
    """Tail exponent of a degree histogram via the Hill estimator, with a
    log-log CCDF regression as cross-check. Requires at least 100 vertices
    of degree >= 2; k_top defaults to n^0.7 capped at 1e5."""
    degrees = np.repeat(
        np.fromiter(hist.keys(), dtype=np.int64), np.fromiter(hist.values(), dtype=np.int64)
    )
    n = degrees.size
    if int(np.sum(degrees >= 2)) < 100:
        raise ParameterError("insufficient data: need >= 100 vertices of degree >= 2")
    positive = degrees[degrees > 0]
    if k_top is None:
        k_top = min(int(n**0.7), 10**5)
    k_top = min(k_top, positive.size - 1)
    tau = hill_tau(positive, k_top)
    ref = float(np.sort(positive)[::-1][k_top])
    return TailFit(
        tau_hat=tau, method="hill", k_top=k_top,
        tau_ccdf=ccdf_regression_tau(positive, ref),
    )


# --- scaling in N ------------------------------------------------------------


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit mean_distance ~ slope * loglog N + intercept.

    points holds one aggregate dict per N; replica_rows one dict per
    (N, replica) for the CSV output. loglog is the natural log of the
    natural log."""

    slope: float
    intercept: float
    slope_stderr: float
    points: list = field(default_factory=list)
    replica_rows: list = field(default_factory=list)
    model: ModelSpec | None = None


def _run_indexed(tasks: dict, threads: int) -> dict:
    """Run no-arg callables keyed by index; deterministic combination."""
    if threads <= 1:
        return {key: fn() for key, fn in tasks.items()}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {key: pool.submit(fn) for key, fn in tasks.items()}
        return {key: fut.result() for key, fut in futures.items()}


def scaling_run(
    spec: ModelSpec,
    n_grid,
    pairs: int,
    replicas: int,
    seed: RngSeed,
    cutoff: int | None = None,
    threads: int = 1,
) -> ScalingFit:
    """Generate `replicas` graphs per N, sample `pairs` giant-component
    pairs each, and fit the mean distance against loglog N."""
    n_grid = sorted(int(n) for n in n_grid)
    if len(set(n_grid)) < 4:
        raise ParameterError("n_grid needs at least 4 distinct sizes")
    if n_grid[-1] < 100 * n_grid[0]:
        raise ParameterError("n_grid must span at least two decades")
    if replicas < 1 or pairs < 1:
        raise ParameterError("replicas and pairs must be >= 1")

    def one(n: int, rep: int):
        rep_seed = derive(seed, n, rep)
        g = models.generate(spec, n, rep_seed)
        return sample_distances(g, pairs, rep_seed, cutoff=cutoff, model=spec)

    tasks = {
        (n, rep): (lambda n=n, rep=rep: one(n, rep))
        for n in n_grid
        for rep in range(replicas)
    }
    results = _run_indexed(tasks, threads)

    points = []
    rows = []
    for n in n_grid:
        pooled = []
        for rep in range(replicas):
            s = results[(n, rep)]
            row = {"model": models.model_label(spec), "n": n, "replica": rep}
            row.update(s.summary())
            rows.append(row)
            pooled.append(s.reached.astype(float))
        merged = np.concatenate(pooled)
        points.append(
            {
                "n": n,
                "loglog_n": math.log(math.log(n)),
                "mean": float(merged.mean()),
                "median": float(np.median(merged)),
                "q05": float(np.quantile(merged, 0.05)),
                "q95": float(np.quantile(merged, 0.95)),
                "pairs": int(merged.size),
            }
        )
    x = np.array([p["loglog_n"] for p in points])
    y = np.array([p["mean"] for p in points])
    coef, cov = np.polyfit(x, y, 1, cov=True)
    return ScalingFit(
        slope=float(coef[0]),
        intercept=float(coef[1]),
        slope_stderr=float(math.sqrt(max(cov[0, 0], 0.0))),
        points=points,
        replica_rows=rows,
        model=spec,
    )


# --- empirical soundness of the configuration-class bound --------------------


def wilson_lower(successes: int, trials: int, z: float = Z_ONE_SIDED_95) -> float:
    """One-sided lower confidence limit of a binomial proportion."""
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = p + z * z / (2.0 * trials)
    rad = z * math.sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials))
    return max(0.0, (center - rad) / denom)


def chung_lu_admissible_kappa(spec: ChungLu, n: int) -> float:
    """Concrete configuration-class kernel constant for unit-scale weights:
    P{i<->j} <= w_i w_j / W = (N/W) N^(2g-1) (ij)^-g, and W >= N, so
    N/W <= 1; rounded up to the kappa >= 1 the bound engine assumes."""
    if spec.scale != 1.0:
        raise ParameterError("kappa derivation implemented for scale = 1 weights only")
    total = float(spec.weights(n).sum())
    return max(1.0, n / total)


def bound_vs_empirical(
    spec: ChungLu,
    n: int,
    replicas: int,
    pairs: int,
    seed: RngSeed,
    epsilon: float = 0.05,
    threads: int = 1,
) -> dict:
    """Compare the assembled bound on P{d(V,W) <= 2 delta; V,W >= ell_0}
    against the Monte Carlo frequency over pairs sampled uniformly from
    giant-component vertices >= ell_0, with a one-sided 95% Wilson lower
    confidence limit on the frequency."""
    if not isinstance(spec, ChungLu):
        raise ParameterError("empirical bound comparison is defined for the expected-degree model")
    kappa = chung_lu_admissible_kappa(spec, n)
    state = bounds.cm_build_ell(n, spec.gamma, kappa, epsilon)
    report = bounds.cm_assemble_bound(state)
    two_delta = 2 * state.delta_steps
    ell0 = int(state.ell[0])

    def one(rep: int):
        rep_seed = derive(seed, n, rep)
        g = models.generate(spec, n, rep_seed)
        comp = components(g)
        giant = comp.giant_vertices()
        eligible = giant[giant >= ell0]
        if eligible.size == 0:
            raise ParameterError("no giant-component vertices above the first threshold")
        rng = generator(rep_seed, "bound-pairs")
        vs = eligible[rng.integers(0, eligible.size, pairs)]
        ws = eligible[rng.integers(0, eligible.size, pairs)]
        dist = bfs_distances(g, vs, ws, cutoff=two_delta)
        return int(np.sum(dist >= 0)), pairs, int(eligible.size)

    results = _run_indexed({rep: (lambda rep=rep: one(rep)) for rep in range(replicas)}, threads)
    successes = sum(results[r][0] for r in range(replicas))
    trials = sum(results[r][1] for r in range(replicas))
    lower = wilson_lower(successes, trials)
    return {
        "model": models.spec_to_json(spec, seed),
        "n": n,
        "epsilon": epsilon,
        "kappa": kappa,
        "delta_steps": state.delta_steps,
        "ell0": ell0,
        "bound_total": report.total,
        "bound_valid": report.valid,
        "successes": successes,
        "trials": trials,
        "empirical_freq": successes / trials,
        "empirical_lower95": lower,
        "sound": lower <= min(1.0, report.total),
        "eligible_per_replica": [results[r][2] for r in range(replicas)],
        "report": bounds.report_to_json(report),
    }
