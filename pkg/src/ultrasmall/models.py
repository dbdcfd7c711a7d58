"""Random generators for five ultrasmall network families.

Five parameterizations are supported:

* fixed-outdegree preferential attachment (m edges per new vertex,
  attachment proportional to degree + delta; m >= 2 with -m < delta < 0
  is the ultrasmall regime, tail exponent tau = 3 + delta/m),
* variable-outdegree preferential attachment driven by a concave
  attachment rule f (edge to each older vertex with probability
  f(younger-degree)/N; tau = 1 + 1/gamma for gamma = lim f(n)/n),
* expected-degree (Chung-Lu) graphs with weights scale*(N/i)^gamma,
* conditionally Poissonian (Norros-Reittu) graphs with Pareto capacities,
* fixed degree sequence with uniform stub matching.

Every generator is a deterministic function of (spec, n, RngSeed); graphs
produced from equal inputs are byte-identical. Generation is sequential
per invocation; independent replicas should use distinct stream ids or
distinct substream paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _kernels, graph
from .errors import ParameterError
from .graph import CompactGraph
from .seeding import RngSeed, generator, kernel_state, seed_sequence


@dataclass(frozen=True)
class AttachmentRule:
    """Concave attachment rule f for the variable-outdegree model.

    Either affine (f(k) = intercept + slope*k) or tabulated values f(0..K)
    with an affine extension of slope tail_slope beyond K. Requires
    f(0) <= 1, f(1) - f(0) < 1, positive values, nonincreasing increments;
    gamma_f = lim f(n)/n is the slope of the affine part.
    """

    kind: str  # "affine" or "table"
    slope: float  # affine slope, or the extension slope of a table
    intercept: float = 0.0
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in ("affine", "table"):
            raise ParameterError(f"unknown attachment rule kind {self.kind!r}")
        if not 0.0 <= self.slope < 1.0:
            raise ParameterError("rule slope must be in [0, 1)")
        if self.kind == "affine":
            if not 0.0 < self.intercept <= 1.0:
                raise ParameterError("affine rule needs 0 < f(0) <= 1")
        else:
            vals = np.asarray(self.values, dtype=float)
            if vals.size == 0 or (vals <= 0).any():
                raise ParameterError("table rule needs positive values")
            if vals[0] > 1.0:
                raise ParameterError("table rule needs f(0) <= 1")
            inc = np.diff(vals)
            if inc.size and inc[0] >= 1.0:
                raise ParameterError("table rule needs f(1) - f(0) < 1")
            if inc.size and (np.diff(inc) > 1e-12).any():
                raise ParameterError("table rule increments must be nonincreasing")
            last_inc = inc[-1] if inc.size else 1.0
            if self.slope > last_inc + 1e-12:
                raise ParameterError("extension slope breaks concavity")

    @property
    def gamma_f(self) -> float:
        return float(self.slope)

    def f_array(self, kmax: int) -> np.ndarray:
        """Values f(0..kmax) inclusive."""
        k = np.arange(kmax + 1, dtype=float)
        if self.kind == "affine":
            return self.intercept + self.slope * k
        vals = np.asarray(self.values, dtype=float)
        out = np.empty(kmax + 1)
        upto = min(kmax + 1, vals.size)
        out[:upto] = vals[:upto]
        if kmax + 1 > vals.size:
            extra = np.arange(1, kmax + 2 - vals.size, dtype=float)
            out[vals.size :] = vals[-1] + self.slope * extra
        return out

    def f(self, k: int) -> float:
        return float(self.f_array(k)[k])


@dataclass(frozen=True)
class PaFixed:
    """Fixed outdegree m >= 1 and attachment tilt delta_attach > -m."""

    m: int
    delta_attach: float

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ParameterError("m must be a positive integer")
        if not self.delta_attach > -self.m:
            raise ParameterError(f"delta_attach must exceed -m = {-self.m}")

    @property
    def ultrasmall(self) -> bool:
        return self.m >= 2 and -self.m < self.delta_attach < 0

    @property
    def tau(self) -> float:
        return 3.0 + self.delta_attach / self.m


@dataclass(frozen=True)
class PaVariable:
    rule: AttachmentRule

    @property
    def ultrasmall(self) -> bool:
        return self.rule.gamma_f > 0.5

    @property
    def tau(self) -> float:
        return 1.0 + 1.0 / self.rule.gamma_f


@dataclass(frozen=True)
class ChungLu:
    """Expected-degree graph with weights w(i, N) = scale * (N/i)^gamma.

    lower_c and upper_c are the certified envelope constants
    c (N/i)^gamma <= w <= C (N/i)^gamma; scale must lie between them.
    """

    gamma: float
    scale: float = 1.0
    lower_c: float = 1.0
    upper_c: float = 1.0

    def __post_init__(self):
        if not 0.5 < self.gamma < 1.0:
            raise ParameterError("gamma must lie in (1/2, 1)")
        if not 0.0 < self.lower_c <= self.scale <= self.upper_c:
            raise ParameterError("need 0 < lower_c <= scale <= upper_c")

    def weights(self, n: int) -> np.ndarray:
        return self.scale * (n / np.arange(1.0, n + 1.0)) ** self.gamma

    @property
    def tau(self) -> float:
        return 1.0 + 1.0 / self.gamma


@dataclass(frozen=True)
class NorrosReittu:
    """Conditionally Poissonian graph; capacities are Pareto with
    P{capacity > x} = tail_const * x^(1-tau) above the matching threshold."""

    tau: float
    tail_const: float = 1.0

    def __post_init__(self):
        if not 2.0 < self.tau < 3.0:
            raise ParameterError("tau must lie in (2, 3)")
        if not self.tail_const > 0:
            raise ParameterError("tail_const must be positive")


@dataclass(frozen=True)
class ConfigModel:
    """Fixed degree sequence with uniform stub matching; degrees are the
    integer ceiling of the same Pareto law used for capacities."""

    tau: float
    tail_const: float = 1.0

    def __post_init__(self):
        if not 2.0 < self.tau < 3.0:
            raise ParameterError("tau must lie in (2, 3)")
        if not self.tail_const > 0:
            raise ParameterError("tail_const must be positive")


ModelSpec = Union[PaFixed, PaVariable, ChungLu, NorrosReittu, ConfigModel]


def _pa_m1_edges(n: int, delta: float, seed: RngSeed) -> np.ndarray:
    targets = _kernels.pa_m1_targets(n, float(delta), kernel_state(seed, "pa_fixed_m1"))
    return np.stack([np.arange(1, n + 1, dtype=np.int64), targets], axis=1)


def pa_m1_replica_targets(n: int, delta_attach: float, seed: RngSeed, replicas: int) -> np.ndarray:
    """Attachment targets of `replicas` independent m=1 runs (row per
    replica, one splitmix substream each). Row r encodes the edge list
    ((i+1, row[i]))_i; the degree of vertex v after step j is
    1{v <= j} + #{i < j : row[i] = v}."""
    if replicas < 1:
        raise ParameterError("replicas must be >= 1")
    states = seed_sequence(seed, "pa_fixed_m1_batch").generate_state(replicas, np.uint64)
    return _kernels.pa_m1_targets_batch(n, float(delta_attach), states)


def gen_pa_fixed_m1(n: int, delta_attach: float, seed: RngSeed) -> CompactGraph:
    """Base preferential attachment run: one vertex and one edge per step.

    Step N+1 attaches to m in [N] with probability
    (deg(m)+delta)/(N(2+delta)+1+delta) and to itself with probability
    (1+delta)/(N(2+delta)+1+delta); the first vertex carries a self-loop.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if not delta_attach > -1.0:
        raise ParameterError("delta_attach must exceed -1")
    return graph.from_edge_arrays(n, _pa_m1_edges(n, delta_attach, seed))


def gen_pa_fixed(n: int, m: int, delta_attach: float, seed: RngSeed) -> CompactGraph:
    """Fixed-outdegree model: run the base model on n*m vertices with tilt
    delta/m, then merge consecutive blocks of m vertices, keeping all edges
    (merged self-loops and parallel edges included). Yields n*m edges."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if int(m) != m or m < 1:
        raise ParameterError("m must be a positive integer")
    if not delta_attach > -m:
        raise ParameterError(f"delta_attach must exceed -m = {-m}")
    base = _pa_m1_edges(n * m, delta_attach / m, seed)
    return graph.from_edge_arrays(n, (base - 1) // m + 1)


def _pa_variable_step(members, occ, fvals, cur, rng):
    """One insertion step on the bucketed Z-state: per bucket k, a
    Binomial(occupancy, min(f(k)/cur, 1)) count of recipients is drawn and
    that many distinct members are selected by partial Fisher-Yates. Moves
    recipients to bucket k+1 and returns them (ascending bucket order).
    Equivalent in law to an independent Bernoulli per older vertex."""
    kmax = len(members) - 1
    probs = np.minimum(fvals[: kmax + 1] / cur, 1.0)
    draws = rng.binomial(np.asarray(occ, dtype=np.int64), probs)
    hits: list[int] = []
    for k in np.nonzero(draws)[0]:
        bucket = members[k]
        j = int(draws[k])
        size = len(bucket)
        for t in range(j):
            r = int(rng.integers(0, size - t))
            bucket[r], bucket[size - 1 - t] = bucket[size - 1 - t], bucket[r]
        chosen = bucket[size - j :]
        del bucket[size - j :]
        if k + 1 > len(members) - 1:
            members.append([])
            occ.append(0)
        members[k + 1].extend(chosen)
        occ[k] -= j
        occ[k + 1] += j
        hits.extend(chosen)
    return hits


def pa_variable_step(z: np.ndarray, rule: AttachmentRule, rng) -> np.ndarray:
    """Recipients of edges from vertex n+1 given the frozen younger-degree
    vector z of an n-vertex graph. Runs the same bucketed step the
    generator uses; exposed so the conditional step law can be checked
    against sum(min(f(z)/n, 1)) directly."""
    z = np.asarray(z, dtype=np.int64)
    cur = z.shape[0]
    kmax = int(z.max()) if cur else 0
    members: list[list[int]] = [[] for _ in range(kmax + 1)]
    for v, k in enumerate(z, start=1):
        members[k].append(v)
    occ = [len(b) for b in members]
    hits = _pa_variable_step(members, occ, rule.f_array(kmax + 1), cur, rng)
    return np.asarray(sorted(hits), dtype=np.int64)


def gen_pa_variable(n: int, rule: AttachmentRule, seed: RngSeed) -> CompactGraph:
    """Variable-outdegree model: the first vertex has no edges; at step N+1
    each older vertex m independently gains the edge {N+1, m} with
    probability min(f(Z[m,N])/N, 1) where Z[m,N] counts younger neighbors.

    Vertices are bucketed by their Z value (f depends only on Z), giving
    near-linear cost without changing the per-vertex Bernoulli law.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    rng = generator(seed, "pa_variable")
    members: list[list[int]] = [[1]]
    occ = [1]
    fvals = rule.f_array(7)
    src: list[int] = []
    dst: list[int] = []
    for cur in range(1, n):  # insert vertex cur+1
        if len(fvals) <= len(members):
            fvals = rule.f_array(2 * len(members))
        for v in _pa_variable_step(members, occ, fvals, cur, rng):
            src.append(cur + 1)
            dst.append(v)
        members[0].append(cur + 1)
        occ[0] += 1
    if src:
        edges = np.stack(
            [np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)], axis=1
        )
    else:
        edges = np.empty((0, 2), dtype=np.int64)
    return graph.from_edge_arrays(n, edges)


def gen_from_weights(weights: np.ndarray, seed: RngSeed) -> CompactGraph:
    """Independent-pair graph: {i, j} is an edge with probability
    min(w_i w_j / sum(w), 1), no self-loops. Weights must be positive and
    nonincreasing (the sampler skips geometrically under that order)."""
    w = np.ascontiguousarray(weights, dtype=np.float64)
    if w.size < 1:
        raise ParameterError("need at least one weight")
    if np.any(w <= 0):
        raise ParameterError("weights must be positive")
    if np.any(np.diff(w) > 0):
        raise ParameterError("weights must be nonincreasing")
    src, dst = _kernels.chung_lu_edges(w, float(w.sum()), kernel_state(seed, "chung_lu"))
    return graph.from_edge_arrays(w.size, np.stack([src, dst], axis=1))


def gen_chung_lu(n: int, spec: ChungLu, seed: RngSeed) -> CompactGraph:
    """Expected-degree graph with weights scale * (N/i)^gamma."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    return gen_from_weights(spec.weights(n), seed)


def gen_from_capacities(capacities: np.ndarray, rng) -> CompactGraph:
    """Poisson(cap_i cap_j / total) parallel edges per pair i < j, no
    self-pairs. Realized by superposition: a Poisson(total/2) number of
    endpoint pairs drawn proportional to capacity, discarding self-pairs
    (their thinned mass is exactly the excluded diagonal)."""
    cap = np.asarray(capacities, dtype=np.float64)
    n = cap.shape[0]
    if n < 1:
        raise ParameterError("need at least one capacity")
    if np.any(cap <= 0):
        raise ParameterError("capacities must be positive")
    total = float(cap.sum())
    count = int(rng.poisson(total / 2.0))
    cum = np.cumsum(cap)
    left = np.searchsorted(cum, rng.random(count) * total, side="right") + 1
    right = np.searchsorted(cum, rng.random(count) * total, side="right") + 1
    keep = left != right
    edges = np.stack([left[keep].astype(np.int64), right[keep].astype(np.int64)], axis=1)
    return graph.from_edge_arrays(n, edges)


def draw_capacities(n: int, tau: float, tail_const: float, rng) -> np.ndarray:
    """Iid Pareto capacities with P{cap > x} = tail_const * x^(1-tau) above
    the threshold tail_const^(1/(tau-1))."""
    xmin = tail_const ** (1.0 / (tau - 1.0))
    return xmin * (1.0 - rng.random(n)) ** (-1.0 / (tau - 1.0))


def gen_norros_reittu(n: int, tau: float, tail_const: float, seed: RngSeed) -> CompactGraph:
    """Static conditionally-Poissonian snapshot: iid Pareto capacities,
    then Poisson(cap_i cap_j / total) parallel edges per pair i < j."""
    spec = NorrosReittu(tau, tail_const)
    if n < 1:
        raise ParameterError("n must be >= 1")
    rng = generator(seed, "norros_reittu")
    return gen_from_capacities(draw_capacities(n, spec.tau, spec.tail_const, rng), rng)


def draw_degree_sequence(n: int, tau: float, tail_const: float, rng) -> np.ndarray:
    """Iid integer degrees with P{D > x} = tail_const * x^(1-tau) for
    integers above the threshold, via the ceiling of a Pareto variable.
    The last degree is decremented by one if the total is odd."""
    xmin = tail_const ** (1.0 / (tau - 1.0))
    d = np.ceil(xmin * (1.0 - rng.random(n)) ** (-1.0 / (tau - 1.0))).astype(np.int64)
    if int(d.sum()) % 2 == 1:
        d[-1] -= 1
    return d


def gen_from_degrees(degrees: np.ndarray, seed: RngSeed) -> CompactGraph:
    """Uniform stub matching of a fixed degree sequence (sum must be even);
    self-loops and parallel edges are kept."""
    degs = np.asarray(degrees, dtype=np.int64)
    n = degs.shape[0]
    if n < 1:
        raise ParameterError("need at least one degree")
    if np.any(degs < 0):
        raise ParameterError("degrees must be nonnegative")
    if int(degs.sum()) % 2 == 1:
        raise ParameterError("degree sum must be even")
    owner = np.repeat(np.arange(1, n + 1, dtype=np.int64), degs)
    if owner.size == 0:
        return graph.from_edge_arrays(n, np.empty((0, 2), dtype=np.int64))
    src, dst = _kernels.match_stubs(owner, kernel_state(seed, "config_stubs"))
    return graph.from_edge_arrays(n, np.stack([src, dst], axis=1))


def gen_config_model(n: int, tau: float, tail_const: float, seed: RngSeed) -> CompactGraph:
    """Fixed degree sequence: draw iid power-law degrees (evenness fixed by
    decrementing the last), then pair the lowest-numbered unpaired stub
    with a uniformly random remaining stub until all stubs are matched."""
    spec = ConfigModel(tau, tail_const)
    if n < 1:
        raise ParameterError("n must be >= 1")
    rng = generator(seed, "config_model")
    degs = draw_degree_sequence(n, spec.tau, spec.tail_const, rng)
    return gen_from_degrees(degs, seed)


def generate(spec: ModelSpec, n: int, seed: RngSeed) -> CompactGraph:
    """Dispatch to the family generator for spec."""
    if isinstance(spec, PaFixed):
        return gen_pa_fixed(n, spec.m, spec.delta_attach, seed)
    if isinstance(spec, PaVariable):
        return gen_pa_variable(n, spec.rule, seed)
    if isinstance(spec, ChungLu):
        return gen_chung_lu(n, spec, seed)
    if isinstance(spec, NorrosReittu):
        return gen_norros_reittu(n, spec.tau, spec.tail_const, seed)
    if isinstance(spec, ConfigModel):
        return gen_config_model(n, spec.tau, spec.tail_const, seed)
    raise ParameterError(f"unknown model spec {spec!r}")


def degree_histogram(g: CompactGraph) -> dict:
    """Map degree -> vertex count; counts sum to n_vertices."""
    counts = np.bincount(g.degrees())
    return {int(d): int(c) for d, c in enumerate(counts) if c > 0}


# --- JSON wire format ------------------------------------------------------

_MODEL_TAGS = {
    PaFixed: "pa_fixed",
    PaVariable: "pa_variable",
    ChungLu: "chung_lu",
    NorrosReittu: "norros_reittu",
    ConfigModel: "config_model",
}


def rule_to_json(rule: AttachmentRule) -> dict:
    if rule.kind == "affine":
        return {"type": "affine", "slope": rule.slope, "intercept": rule.intercept}
    return {"type": "table", "values": list(rule.values), "tail_slope": rule.slope}


def rule_from_json(obj: dict) -> AttachmentRule:
    if obj.get("type") == "affine":
        return AttachmentRule("affine", float(obj["slope"]), float(obj["intercept"]))
    if obj.get("type") == "table":
        return AttachmentRule("table", float(obj["tail_slope"]), values=tuple(obj["values"]))
    raise ParameterError(f"unknown attachment rule type {obj.get('type')!r}")


def spec_to_json(spec: ModelSpec, seed: RngSeed) -> dict:
    obj: dict = {"model": _MODEL_TAGS[type(spec)], "seed": int(seed.seed), "stream": int(seed.stream)}
    if isinstance(spec, PaFixed):
        obj.update(m=spec.m, delta_attach=spec.delta_attach)
    elif isinstance(spec, PaVariable):
        obj.update(rule=rule_to_json(spec.rule))
    elif isinstance(spec, ChungLu):
        obj.update(gamma=spec.gamma, scale=spec.scale, lower_c=spec.lower_c, upper_c=spec.upper_c)
    else:
        obj.update(tau=spec.tau, tail_const=spec.tail_const)
    return obj


def spec_from_json(obj: dict) -> tuple:
    """Returns (spec, seed)."""
    seed = RngSeed(int(obj.get("seed", 0)), int(obj.get("stream", 0)))
    tag = obj.get("model")
    if tag == "pa_fixed":
        return PaFixed(int(obj["m"]), float(obj["delta_attach"])), seed
    if tag == "pa_variable":
        return PaVariable(rule_from_json(obj["rule"])), seed
    if tag == "chung_lu":
        return (
            ChungLu(
                float(obj["gamma"]),
                float(obj.get("scale", 1.0)),
                float(obj.get("lower_c", 1.0)),
                float(obj.get("upper_c", 1.0)),
            ),
            seed,
        )
    if tag == "norros_reittu":
        return NorrosReittu(float(obj["tau"]), float(obj.get("tail_const", 1.0))), seed
    if tag == "config_model":
        return ConfigModel(float(obj["tau"]), float(obj.get("tail_const", 1.0))), seed
    raise ParameterError(f"unknown model tag {tag!r}")


def model_label(spec: ModelSpec) -> str:
    return _MODEL_TAGS[type(spec)]
