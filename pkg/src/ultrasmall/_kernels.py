"""Numba kernels for the hot loops: generation, BFS, component labeling.

Randomness inside kernels comes from an inlined splitmix64 stream, so a
64-bit state word fixes the output exactly regardless of numpy's global
state or the numba version. All kernels are pure functions of their
arguments, allocate their own scratch and release the GIL, so callers may
run them from worker threads on independent streams.
"""

import numpy as np
from numba import njit

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / float(1 << 53)


@njit(cache=True, nogil=True, inline="always")
def _mix(state):
    """One splitmix64 step: returns (new_state, output_word)."""
    state = (state + _GOLDEN) & _MASK
    z = state
    z = ((z ^ (z >> np.uint64(30))) * _MIX1) & _MASK
    z = ((z ^ (z >> np.uint64(27))) * _MIX2) & _MASK
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True, nogil=True, inline="always")
def _u01(z):
    """Map a 64-bit word to a double in [0, 1)."""
    return float(z >> np.uint64(11)) * _U53


@njit(cache=True, nogil=True)
def pa_m1_targets(n, delta, state):
    """Sequential fixed-outdegree attachment run with one edge per step.

    Vertex 1 starts with a self-loop; vertex N+1 then attaches to m with
    probability (deg(m)+delta)/(N(2+delta)+1+delta) or to itself with
    probability (1+delta)/(N(2+delta)+1+delta). Requires delta > -1.

    Returns targets[i] = attachment target of vertex i+1 (targets[i] == i+1
    encodes a self-loop); the edge list is ((i+1, targets[i]))_i.

    The degree-proportional part is drawn from a flat endpoint array (each
    edge contributes both endpoints). The +delta tilt is realized as a
    two-component mixture for delta >= 0, and by rejection with acceptance
    (deg+delta)/deg for delta < 0; both are exact.
    """
    targets = np.empty(n, dtype=np.int64)
    deg = np.zeros(n + 1, dtype=np.int64)
    endpoints = np.empty(2 * n, dtype=np.int64)
    targets[0] = 1
    endpoints[0] = 1
    endpoints[1] = 1
    deg[1] = 2
    for m in range(1, n):  # insert vertex m+1 into the m-vertex graph
        denom = m * (2.0 + delta) + 1.0 + delta
        state, z = _mix(state)
        if _u01(z) * denom < 1.0 + delta:
            tgt = m + 1
        elif delta >= 0.0:
            # mass 2m on the endpoint array, mass m*delta on the uniform part
            state, z = _mix(state)
            if _u01(z) * (2.0 + delta) < 2.0:
                state, z = _mix(state)
                tgt = endpoints[z % np.uint64(2 * m)]
            else:
                state, z = _mix(state)
                tgt = np.int64(z % np.uint64(m)) + 1
        else:
            while True:
                state, z = _mix(state)
                cand = endpoints[z % np.uint64(2 * m)]
                state, z = _mix(state)
                if _u01(z) * deg[cand] < deg[cand] + delta:
                    tgt = cand
                    break
        targets[m] = tgt
        endpoints[2 * m] = m + 1
        endpoints[2 * m + 1] = tgt
        deg[m + 1] += 1
        deg[tgt] += 1
    return targets


@njit(cache=True, nogil=True)
def pa_m1_targets_batch(n, delta, states):
    """Attachment targets for len(states) independent replicas of the
    m=1 process, one splitmix state word per replica. Row r is the
    targets array of replica r (int32)."""
    reps = states.shape[0]
    out = np.empty((reps, n), dtype=np.int32)
    for r in range(reps):
        t = pa_m1_targets(n, delta, states[r])
        for i in range(n):
            out[r, i] = np.int32(t[i])
    return out


@njit(cache=True, nogil=True)
def chung_lu_edges(weights, total, state):
    """Independent-pair sampler for edge probabilities min(w_i w_j / total, 1).

    Exploits that weights are nonincreasing: for each i the probabilities
    over j > i are nonincreasing, so candidate j's can be reached by
    geometric skips under the current bound and accepted with ratio
    q/p (Miller-Hagberg style). Expected cost O(N + edges).
    """
    n = weights.shape[0]
    cap = np.int64(total * 0.75) + 4096
    src = np.empty(cap, dtype=np.int64)
    dst = np.empty(cap, dtype=np.int64)
    cnt = 0
    for i in range(n - 1):
        wi = weights[i]
        j = i + 1
        p = wi * weights[j] / total
        if p > 1.0:
            p = 1.0
        while j < n:
            if p < 1.0:
                state, z = _mix(state)
                u = _u01(z)
                lg = np.log(1.0 - p)
                if lg >= 0.0:  # p underflowed to zero
                    break
                j += np.int64(np.floor(np.log(1.0 - u) / lg))
                if j >= n:
                    break
            q = wi * weights[j] / total
            if q > 1.0:
                q = 1.0
            state, z = _mix(state)
            if _u01(z) * p < q:
                if cnt == cap:
                    cap *= 2
                    new_src = np.empty(cap, dtype=np.int64)
                    new_dst = np.empty(cap, dtype=np.int64)
                    new_src[:cnt] = src
                    new_dst[:cnt] = dst
                    src = new_src
                    dst = new_dst
                src[cnt] = i + 1
                dst[cnt] = j + 1
                cnt += 1
            p = q
            j += 1
    return src[:cnt], dst[:cnt]


@njit(cache=True, nogil=True)
def match_stubs(owner, state):
    """Uniform stub matching: pair the lowest unpaired stub with a uniform
    random remaining stub until all are matched. len(owner) must be even.
    """
    total = owner.shape[0]
    src = np.empty(total // 2, dtype=np.int64)
    dst = np.empty(total // 2, dtype=np.int64)
    work = owner.copy()
    e = 0
    i = 0
    while i < total:
        state, z = _mix(state)
        r = i + 1 + np.int64(z % np.uint64(total - i - 1))
        src[e] = work[i]
        dst[e] = work[r]
        work[r] = work[i + 1]
        e += 1
        i += 2
    return src, dst


@njit(cache=True, nogil=True)
def bfs_pair_distances(offsets, neighbors, vs, ws, cutoff):
    """Bidirectional level-by-level BFS distance per (vs[q], ws[q]) pair.

    Returns -1 where the distance exceeds cutoff or the pair is not
    connected. Self-loops and parallel edges never relax a distance because
    already-visited vertices are skipped. Scratch is allocated once and only
    touched entries are reset between queries.
    """
    n = offsets.shape[0] - 2  # offsets is 1-based: adjacency of v is neighbors[offsets[v]:offsets[v+1]]
    unreached = np.int64(-1)
    dist_f = np.full(n + 1, -1, dtype=np.int32)
    dist_b = np.full(n + 1, -1, dtype=np.int32)
    front_f = np.empty(n, dtype=np.int32)
    front_b = np.empty(n, dtype=np.int32)
    nxt = np.empty(n, dtype=np.int32)
    touched_f = np.empty(n, dtype=np.int32)
    touched_b = np.empty(n, dtype=np.int32)
    out = np.empty(vs.shape[0], dtype=np.int64)
    big = np.int64(1) << np.int64(62)
    for q in range(vs.shape[0]):
        v = np.int32(vs[q])
        w = np.int32(ws[q])
        if v == w:
            out[q] = 0 if cutoff >= 0 else unreached
            continue
        dist_f[v] = 0
        dist_b[w] = 0
        touched_f[0] = v
        touched_b[0] = w
        ntf = 1
        ntb = 1
        front_f[0] = v
        front_b[0] = w
        szf = 1
        szb = 1
        df = np.int64(0)
        db = np.int64(0)
        best = big
        while szf > 0 and szb > 0 and df + db < best and df + db < cutoff:
            if szf <= szb:
                m = 0
                for fi in range(szf):
                    u = front_f[fi]
                    for ei in range(offsets[u], offsets[u + 1]):
                        x = neighbors[ei]
                        if dist_f[x] < 0:
                            dist_f[x] = np.int32(df + 1)
                            touched_f[ntf] = x
                            ntf += 1
                            nxt[m] = x
                            m += 1
                            if dist_b[x] >= 0:
                                tot = df + 1 + np.int64(dist_b[x])
                                if tot < best:
                                    best = tot
                tmp = front_f
                front_f = nxt
                nxt = tmp
                szf = m
                df += 1
            else:
                m = 0
                for fi in range(szb):
                    u = front_b[fi]
                    for ei in range(offsets[u], offsets[u + 1]):
                        x = neighbors[ei]
                        if dist_b[x] < 0:
                            dist_b[x] = np.int32(db + 1)
                            touched_b[ntb] = x
                            ntb += 1
                            nxt[m] = x
                            m += 1
                            if dist_f[x] >= 0:
                                tot = db + 1 + np.int64(dist_f[x])
                                if tot < best:
                                    best = tot
                tmp = front_b
                front_b = nxt
                nxt = tmp
                szb = m
                db += 1
        out[q] = best if best <= cutoff else unreached
        for t in range(ntf):
            dist_f[touched_f[t]] = -1
        for t in range(ntb):
            dist_b[touched_b[t]] = -1
    return out


@njit(cache=True, nogil=True)
def label_components(offsets, neighbors):
    """Flood-fill component labels. Ids are assigned in order of the
    smallest vertex of each component, so ties in size break toward the
    smaller id deterministically.
    """
    n = offsets.shape[0] - 2
    labels = np.full(n + 1, -1, dtype=np.int32)
    sizes = np.zeros(n, dtype=np.int64)
    queue = np.empty(n, dtype=np.int32)
    ncomp = 0
    for start in range(1, n + 1):
        if labels[start] >= 0:
            continue
        labels[start] = ncomp
        queue[0] = start
        head = 0
        tail = 1
        cnt = 1
        while head < tail:
            u = queue[head]
            head += 1
            for ei in range(offsets[u], offsets[u + 1]):
                x = neighbors[ei]
                if labels[x] < 0:
                    labels[x] = ncomp
                    queue[tail] = x
                    tail += 1
                    cnt += 1
        sizes[ncomp] = cnt
        ncomp += 1
    return labels, sizes[:ncomp]
