"""Immutable compact undirected multigraph with BFS distance queries.

Vertices are labelled 1..N (smaller label = older vertex in the dynamic
models). Adjacency is stored in compressed sparse rows; every edge appears
in both endpoint lists and a self-loop (v, v) appears twice in v's list,
so degree(v) counts self-loops twice. Parallel edges are kept in storage
but cannot shorten a distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import GraphFileError, InputError

MAGIC = b"USNG"
FORMAT_VERSION = 1


@dataclass(frozen=True)
class CompactGraph:
    """CSR multigraph. Arrays are read-only; instances are safe to share."""

    n_vertices: int
    n_edges: int
    offsets: np.ndarray  # int64, length n_vertices + 2, 1-based slots
    neighbors: np.ndarray  # int32, length 2 * n_edges, sorted per vertex
    edges: np.ndarray  # int64, shape (n_edges, 2), construction order

    def degrees(self) -> np.ndarray:
        """Degree of every vertex (index v-1), self-loops counted twice."""
        return np.diff(self.offsets[1:])

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return int(self.offsets[v + 1] - self.offsets[v])

    def neighbors_of(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        return self.neighbors[self.offsets[v] : self.offsets[v + 1]]

    def _check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.n_vertices:
            raise InputError(f"vertex {v} out of range 1..{self.n_vertices}")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def from_edge_arrays(n: int, edges: np.ndarray) -> CompactGraph:
    """Build a CompactGraph from an (E, 2) int64 array of 1-based endpoints."""
    edges = np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size and (edges.min() < 1 or edges.max() > n):
        raise InputError(f"edge endpoint out of range 1..{n}")
    if n < 0:
        raise InputError("vertex count must be nonnegative")
    a = np.concatenate([edges[:, 0], edges[:, 1]])
    b = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.lexsort((b, a))  # group by owner, sort each list ascending
    counts = np.bincount(a, minlength=n + 1)  # counts[0] is always zero
    offsets = np.zeros(n + 2, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return CompactGraph(
        n_vertices=n,
        n_edges=edges.shape[0],
        offsets=_freeze(offsets),
        neighbors=_freeze(b[order].astype(np.int32)),
        edges=_freeze(edges),
    )


def build_graph(n: int, edges) -> CompactGraph:
    """Build from any sequence of (v, w) pairs; see from_edge_arrays."""
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    if arr.size == 0:
        arr = np.empty((0, 2), dtype=np.int64)
    return from_edge_arrays(n, arr)


def bfs_distances(g: CompactGraph, vs, ws, cutoff: int | None = None) -> np.ndarray:
    """Batch BFS distances; -1 marks pairs beyond cutoff or disconnected.

    cutoff defaults to n_vertices, which is effectively unbounded.
    """
    vs = np.ascontiguousarray(vs, dtype=np.int64)
    ws = np.ascontiguousarray(ws, dtype=np.int64)
    if vs.shape != ws.shape:
        raise InputError("vs and ws must have the same length")
    for arr in (vs, ws):
        if arr.size and (arr.min() < 1 or arr.max() > g.n_vertices):
            raise InputError("vertex id out of range")
    if cutoff is None:
        cutoff = g.n_vertices
    if cutoff < 0:
        raise InputError("cutoff must be nonnegative")
    return _kernels.bfs_pair_distances(g.offsets, g.neighbors, vs, ws, np.int64(cutoff))


def bfs_distance(g: CompactGraph, v: int, w: int, cutoff: int | None = None) -> int | None:
    """Minimum edge count of a path v -> w, or None if it exceeds cutoff."""
    d = bfs_distances(g, [v], [w], cutoff)[0]
    return None if d < 0 else int(d)


@dataclass(frozen=True)
class ComponentLabeling:
    """Partition of vertices into connected components.

    label[v-1] is the component id of vertex v; ids are ordered by the
    smallest vertex they contain. giant_id is the largest component,
    smallest id on ties.
    """

    label: np.ndarray  # int32, length n_vertices
    sizes: np.ndarray  # int64, one entry per component
    giant_id: int

    @property
    def n_components(self) -> int:
        return int(self.sizes.shape[0])

    @property
    def giant_size(self) -> int:
        return int(self.sizes[self.giant_id])

    def giant_vertices(self) -> np.ndarray:
        """1-based ids of the giant component's vertices, ascending."""
        return np.nonzero(self.label == self.giant_id)[0].astype(np.int64) + 1


def components(g: CompactGraph) -> ComponentLabeling:
    labels, sizes = _kernels.label_components(g.offsets, g.neighbors)
    return ComponentLabeling(
        label=_freeze(labels[1:].copy()),
        sizes=_freeze(sizes),
        giant_id=int(np.argmax(sizes)) if sizes.size else 0,
    )


def save_graph(g: CompactGraph, path) -> None:
    """Binary edge list: magic, version byte, N and E as u64 LE, then
    consecutive u64 LE endpoint pairs (1-based)."""
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(bytes([FORMAT_VERSION]))
        fh.write(np.array([g.n_vertices, g.n_edges], dtype="<u8").tobytes())
        fh.write(np.ascontiguousarray(g.edges, dtype="<u8").tobytes())


def load_graph(path) -> CompactGraph:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != MAGIC:
        raise GraphFileError(f"{path}: bad magic, not a graph file")
    if blob[4] != FORMAT_VERSION:
        raise GraphFileError(f"{path}: unsupported format version {blob[4]}")
    header = np.frombuffer(blob, dtype="<u8", count=2, offset=5)
    n, n_edges = int(header[0]), int(header[1])
    expect = 5 + 16 + 16 * n_edges
    if len(blob) != expect:
        raise GraphFileError(f"{path}: truncated (have {len(blob)} bytes, want {expect})")
    edges = np.frombuffer(blob, dtype="<u8", offset=21).astype(np.int64).reshape(-1, 2)
    return from_edge_arrays(n, edges)


def save_edgelist_text(g: CompactGraph, path) -> None:
    """Plain-text edge list, one "v w" pair per line."""
    with open(path, "w") as fh:
        fh.write(f"# USNG text edge list n={g.n_vertices} m={g.n_edges}\n")
        for v, w in g.edges:
            fh.write(f"{v} {w}\n")


def load_edgelist_text(path, n: int | None = None) -> CompactGraph:
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if n is None and "n=" in line:
                    n = int(line.split("n=")[1].split()[0])
                continue
            v, w = line.split()
            pairs.append((int(v), int(w)))
    arr = np.array(pairs, dtype=np.int64) if pairs else np.empty((0, 2), dtype=np.int64)
    if n is None:
        n = int(arr.max()) if arr.size else 0
    return from_edge_arrays(n, arr)
