import numpy as np
import pytest

import ultrasmall as us
from ultrasmall.errors import GraphFileError, InputError
from ultrasmall.graph import load_edgelist_text, save_edgelist_text

from conftest import floyd_warshall, random_edges, union_find_components


def test_build_selfloop_counts_twice():
    g = us.build_graph(1, [(1, 1)])
    assert g.degree(1) == 2
    assert list(g.neighbors_of(1)) == [1, 1]


def test_build_empty_graph():
    g = us.build_graph(3, [])
    assert list(g.degrees()) == [0, 0, 0]
    assert us.components(g).n_components == 3


def test_build_path_graph_degrees():
    g = us.build_graph(4, [(1, 2), (2, 3), (3, 4)])
    assert list(g.degrees()) == [1, 2, 2, 1]


def test_build_rejects_out_of_range_endpoints():
    with pytest.raises(InputError):
        us.build_graph(3, [(1, 4)])
    with pytest.raises(InputError):
        us.build_graph(3, [(0, 2)])


def test_neighbor_lists_sorted():
    g = us.build_graph(5, [(3, 1), (3, 5), (3, 2), (3, 4), (3, 3)])
    assert list(g.neighbors_of(3)) == [1, 2, 3, 3, 4, 5]


def test_bfs_path_graph():
    g = us.build_graph(4, [(1, 2), (2, 3), (3, 4)])
    assert us.bfs_distance(g, 1, 4) == 3
    assert us.bfs_distance(g, 1, 1) == 0
    assert us.bfs_distance(g, 1, 4, cutoff=2) is None
    assert us.bfs_distance(g, 1, 3, cutoff=2) == 2


def test_bfs_multiedges_and_selfloops_do_not_shorten():
    g = us.build_graph(3, [(1, 2), (1, 2), (1, 1), (2, 3)])
    assert us.bfs_distance(g, 1, 3) == 2
    assert us.bfs_distance(g, 1, 2) == 1


def test_bfs_matches_dense_oracle_small_graphs():
    rng = np.random.default_rng(1234)
    for trial in range(8):
        n = int(rng.integers(2, 51))
        edges = random_edges(rng, n, int(rng.integers(0, 3 * n)))
        g = us.build_graph(n, edges)
        ref = floyd_warshall(n, edges)
        vs, ws = np.meshgrid(np.arange(1, n + 1), np.arange(1, n + 1))
        got = us.bfs_distances(g, vs.ravel(), ws.ravel()).reshape(n, n).T
        want = np.where(np.isinf(ref), -1, ref).astype(np.int64)
        assert np.array_equal(got, want)


def test_bfs_symmetry_and_triangle_inequality():
    rng = np.random.default_rng(99)
    edges = random_edges(rng, 300, 500)
    g = us.build_graph(300, edges)
    comp = us.components(g)
    giant = comp.giant_vertices()
    trips = giant[rng.integers(0, giant.size, size=(60, 3))]
    duv = us.bfs_distances(g, trips[:, 0], trips[:, 1])
    dvw = us.bfs_distances(g, trips[:, 1], trips[:, 2])
    duw = us.bfs_distances(g, trips[:, 0], trips[:, 2])
    rev = us.bfs_distances(g, trips[:, 1], trips[:, 0])
    assert np.array_equal(duv, rev)
    assert np.all(duw <= duv + dvw)


def test_components_path_and_isolated():
    g = us.build_graph(4, [(1, 2), (2, 3), (3, 4)])
    comp = us.components(g)
    assert comp.n_components == 1 and comp.giant_size == 4

    g2 = us.build_graph(3, [])
    comp2 = us.components(g2)
    assert comp2.n_components == 3
    assert comp2.giant_size == 1
    # tie broken toward the component holding vertex 1
    assert comp2.giant_id == comp2.label[0]


def test_components_match_union_find_oracle():
    rng = np.random.default_rng(777)
    edges = random_edges(rng, 200, 160)
    g = us.build_graph(200, edges)
    comp = us.components(g)
    groups = union_find_components(200, edges)
    assert comp.n_components == len(groups)
    got_sizes = sorted(int(s) for s in comp.sizes)
    assert got_sizes == sorted(len(m) for m in groups.values())
    # same partition: vertices share a label iff the oracle groups them
    for members in groups.values():
        labels = {int(comp.label[v - 1]) for v in members}
        assert len(labels) == 1
    assert comp.giant_size == max(len(m) for m in groups.values())


def test_degree_sum_is_twice_edges():
    rng = np.random.default_rng(5)
    for n, m in [(10, 0), (50, 100), (200, 700)]:
        g = us.build_graph(n, random_edges(rng, n, m))
        assert int(g.degrees().sum()) == 2 * g.n_edges


def test_binary_roundtrip(tmp_path):
    rng = np.random.default_rng(8)
    g = us.build_graph(40, random_edges(rng, 40, 90))
    path = tmp_path / "g.usng"
    us.save_graph(g, path)
    h = us.load_graph(path)
    assert h.n_vertices == g.n_vertices
    assert np.array_equal(h.edges, g.edges)
    assert np.array_equal(h.offsets, g.offsets)
    assert np.array_equal(h.neighbors, g.neighbors)
    # identical bytes when saved again
    path2 = tmp_path / "h.usng"
    us.save_graph(h, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_binary_format_layout(tmp_path):
    g = us.build_graph(2, [(1, 2)])
    path = tmp_path / "g.usng"
    us.save_graph(g, path)
    blob = path.read_bytes()
    assert blob[:4] == b"USNG"
    assert blob[4] == 1
    assert int.from_bytes(blob[5:13], "little") == 2  # N
    assert int.from_bytes(blob[13:21], "little") == 1  # edge count
    assert int.from_bytes(blob[21:29], "little") == 1
    assert int.from_bytes(blob[29:37], "little") == 2


def test_binary_rejects_bad_magic_and_truncation(tmp_path):
    path = tmp_path / "bad"
    path.write_bytes(b"NOPE" + bytes(40))
    with pytest.raises(GraphFileError):
        us.load_graph(path)
    g = us.build_graph(3, [(1, 2), (2, 3)])
    gp = tmp_path / "g.usng"
    us.save_graph(g, gp)
    gp.write_bytes(gp.read_bytes()[:-8])
    with pytest.raises(GraphFileError):
        us.load_graph(gp)


def test_text_roundtrip(tmp_path):
    g = us.build_graph(5, [(1, 2), (2, 3), (5, 5)])
    path = tmp_path / "g.txt"
    save_edgelist_text(g, path)
    h = load_edgelist_text(path)
    assert h.n_vertices == 5
    assert np.array_equal(h.edges, g.edges)


def test_graph_arrays_are_readonly():
    g = us.build_graph(3, [(1, 2)])
    with pytest.raises(ValueError):
        g.neighbors[0] = 9
    with pytest.raises(ValueError):
        g.edges[0, 0] = 9
