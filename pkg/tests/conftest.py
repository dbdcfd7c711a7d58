"""Shared independent oracles for the test suite.

These implementations deliberately avoid the package's own code paths:
distances come from a dense cubic-time all-pairs pass, components from
union-find, and the attachment-model degree law from its closed form.
"""

import math

import numpy as np
import pytest


def floyd_warshall(n: int, edges) -> np.ndarray:
    """Dense all-pairs shortest paths; dist[i][j] for 1-based vertices at
    [i-1, j-1], inf where unreachable."""
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for v, w in edges:
        if v != w:
            dist[v - 1, w - 1] = 1.0
            dist[w - 1, v - 1] = 1.0
    for k in range(n):
        dist = np.minimum(dist, dist[:, k : k + 1] + dist[k : k + 1, :])
    return dist


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n + 1))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def union_find_components(n: int, edges) -> dict:
    """Map root -> set of member vertices (1-based)."""
    uf = UnionFind(n)
    for v, w in edges:
        uf.union(v, w)
    groups: dict = {}
    for v in range(1, n + 1):
        groups.setdefault(uf.find(v), set()).add(v)
    return groups


def pa_m1_degree_moment(m: int, n: int, delta: float) -> float:
    """Closed form for E[deg(m) in the n-vertex m=1 graph] + delta:
    (1+delta) Gamma(n+1) Gamma(m-g) / (Gamma(n+1-g) Gamma(m)) with
    g = 1/(2+delta)."""
    g = 1.0 / (2.0 + delta)
    return (1.0 + delta) * math.exp(
        math.lgamma(n + 1) + math.lgamma(m - g) - math.lgamma(n + 1 - g) - math.lgamma(m)
    )


def pa_m1_edge_probability(m: int, n: int, delta: float) -> float:
    """P{m <-> n} = (E deg(m) in the (n-1)-graph + delta) / (n(2+delta) - 1)."""
    assert m < n
    return pa_m1_degree_moment(m, n - 1, delta) / (n * (2.0 + delta) - 1.0)


def random_edges(rng, n: int, n_edges: int) -> np.ndarray:
    """Uniform random multigraph edges (self-loops possible)."""
    return rng.integers(1, n + 1, size=(n_edges, 2)).astype(np.int64)


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile the numba kernels once so timed tests measure runtime only."""
    import ultrasmall as us
    from ultrasmall.seeding import RngSeed

    g = us.gen_pa_fixed(20, 2, -0.5, RngSeed(0))
    us.bfs_distances(g, [1, 2], [3, 4])
    us.components(g)
    us.gen_chung_lu(50, us.ChungLu(0.6), RngSeed(0))
    us.gen_config_model(50, 2.5, 1.0, RngSeed(0))
    from ultrasmall.models import pa_m1_replica_targets

    pa_m1_replica_targets(5, -0.5, RngSeed(0), 2)
    yield
