"""Numba kernels for the rewiring hot loop.

Graph state inside the kernels is a padded neighbor table ``nbr[n, cap]``
plus a degree vector; row ``v`` holds the neighbors of ``v`` in its first
``deg[v]`` slots (unordered).  Edges are also kept as an ``(m, 2)`` array so
an edge can be drawn uniformly in O(1).
"""
import math

import numpy as np
from numba import njit

GREEDY = 0
ANNEAL = 1

# status codes returned by rewire_loop
ST_BUDGET = 0
ST_STALLED = 1
ST_NO_MOVES = 2


@njit(cache=True)
def bfs_distance_sum(nbr, deg, sources, n):
    """Sum of hop distances from each source to every node (ordered pairs).

    Returns -1 as soon as one BFS fails to reach all nodes.
    """
    dist = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    total = 0
    for s in sources:
        dist[:] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            x = queue[head]
            head += 1
            dx = dist[x] + 1
            for k in range(deg[x]):
                y = nbr[x, k]
                if dist[y] < 0:
                    dist[y] = dx
                    total += dx
                    queue[tail] = y
                    tail += 1
        if tail < n:
            return -1
    return total


@njit(cache=True)
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def bitset_distance_sum(nbr, deg, sources, n):
    """Same result as ``bfs_distance_sum`` via bit-parallel multi-source BFS.

    Node v carries the set of sources that have reached it; one BFS level
    ORs in the sets of all neighbors.  The distance sum accumulates, per
    level, the number of (source, node) pairs still unreached.
    """
    k = sources.shape[0]
    words = (k + 63) // 64
    reach = np.zeros((n, words), np.uint64)
    for i in range(k):
        reach[sources[i], i // 64] |= np.uint64(1) << np.uint64(i % 64)
    nxt = np.empty_like(reach)
    target = k * n
    reached = k
    total = 0
    while reached < target:
        total += target - reached
        count = 0
        for v in range(n):
            for t in range(words):
                nxt[v, t] = reach[v, t]
            for j in range(deg[v]):
                u = nbr[v, j]
                for t in range(words):
                    nxt[v, t] |= reach[u, t]
            for t in range(words):
                count += _popcount(nxt[v, t])
        if count == reached:
            return -1
        reached = count
        reach, nxt = nxt, reach
    return total


@njit(cache=True)
def bfs_eccentricity_max(nbr, deg, n):
    """Largest eccentricity over all nodes, -1 if disconnected."""
    dist = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    best = 0
    for s in range(n):
        dist[:] = -1
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            x = queue[head]
            head += 1
            dx = dist[x] + 1
            for k in range(deg[x]):
                y = nbr[x, k]
                if dist[y] < 0:
                    dist[y] = dx
                    if dx > best:
                        best = dx
                    queue[tail] = y
                    tail += 1
        if tail < n:
            return -1
    return best


@njit(cache=True)
def all_pairs_hops(nbr, deg, n):
    out = np.full((n, n), -1, np.int32)
    queue = np.empty(n, np.int32)
    for s in range(n):
        row = out[s]
        row[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            x = queue[head]
            head += 1
            dx = row[x] + 1
            for k in range(deg[x]):
                y = nbr[x, k]
                if row[y] < 0:
                    row[y] = dx
                    queue[tail] = y
                    tail += 1
    return out


@njit(cache=True)
def _reaches(nbr, deg, src, dst, n, seen, queue):
    seen[:] = False
    seen[src] = True
    queue[0] = src
    head = 0
    tail = 1
    while head < tail:
        x = queue[head]
        head += 1
        for k in range(deg[x]):
            y = nbr[x, k]
            if y == dst:
                return True
            if not seen[y]:
                seen[y] = True
                queue[tail] = y
                tail += 1
    return False


@njit(cache=True)
def _power(x, e):
    if e == 0.0:
        return 1.0
    if e == 1.0:
        return x
    if e == 2.0:
        return x * x
    return math.exp(e * math.log(x))


@njit(cache=True)
def _pair_weight(p, q, a, b):
    return _power(p, a) * _power(q, b) + _power(q, a) * _power(p, b)


@njit(cache=True)
def _local_f2(nbr, deg, touched, a, b, labels, s):
    """F2 contribution of every edge with an endpoint in ``touched``.

    An edge joining two touched nodes is counted once, from its smaller end.
    """
    total = 0.0
    for x in touched:
        dx = float(deg[x])
        for k in range(deg[x]):
            y = nbr[x, k]
            inside = False
            for z in touched:
                if z == y:
                    inside = True
            if inside and y < x:
                continue
            t = _pair_weight(dx, float(deg[y]), a, b)
            if labels[x] != labels[y]:
                t *= s
            total += t
    return total


@njit(cache=True)
def total_f2(nbr, deg, n, a, b, labels, s):
    total = 0.0
    for i in range(n):
        di = float(deg[i])
        for k in range(deg[i]):
            j = nbr[i, k]
            if j > i:
                t = _pair_weight(di, float(deg[j]), a, b)
                if labels[i] != labels[j]:
                    t *= s
                total += t
    return total


@njit(cache=True)
def _has_edge(nbr, deg, u, v):
    for k in range(deg[u]):
        if nbr[u, k] == v:
            return True
    return False


@njit(cache=True)
def _drop(nbr, deg, u, v):
    d = deg[u]
    for k in range(d):
        if nbr[u, k] == v:
            nbr[u, k] = nbr[u, d - 1]
            deg[u] = d - 1
            return


@njit(cache=True)
def swap_edge(nbr, deg, p, q, r, t):
    """Replace edge (p, q) with (r, t).  Caller guarantees capacity."""
    _drop(nbr, deg, p, q)
    _drop(nbr, deg, q, p)
    nbr[r, deg[r]] = t
    deg[r] += 1
    nbr[t, deg[t]] = r
    deg[t] += 1


@njit(cache=True)
def _touched(p, q, r, t):
    out = np.empty(4, np.int64)
    k = 0
    for x in (p, q, r, t):
        dup = False
        for j in range(k):
            if out[j] == x:
                dup = True
        if not dup:
            out[k] = x
            k += 1
    return out[:k]


@njit(cache=True)
def f2_swap_delta(nbr, deg, p, q, r, t, a, b, labels, s):
    """F2 change of replacing (p, q) with (r, t); the table is left untouched."""
    touched = _touched(p, q, r, t)
    before = _local_f2(nbr, deg, touched, a, b, labels, s)
    swap_edge(nbr, deg, p, q, r, t)
    after = _local_f2(nbr, deg, touched, a, b, labels, s)
    swap_edge(nbr, deg, r, t, p, q)
    return after - before


@njit(cache=True)
def _grow(buf, size):
    if size < buf.shape[0]:
        return buf
    out = np.empty((buf.shape[0] * 2,) + buf.shape[1:], buf.dtype)
    out[: buf.shape[0]] = buf
    return out


@njit(cache=True)
def _draw_move(nbr, deg, edges, n, x_min, cap, two_ended, seen, queue):
    """One random candidate; returns (ok, idx, p, q, r, t) with the table
    holding the moved graph when ok."""
    m = edges.shape[0]
    idx = np.random.randint(m)
    if np.random.random() < 0.5:
        p = edges[idx, 0]
        q = edges[idx, 1]
    else:
        p = edges[idx, 1]
        q = edges[idx, 0]
    if two_ended:
        r = np.random.randint(n)
        t = np.random.randint(n)
    else:
        r = p
        t = np.random.randint(n)
    if r == t or _has_edge(nbr, deg, r, t):
        return False, idx, p, q, r, t
    if deg[r] >= cap or deg[t] >= cap:
        return False, idx, p, q, r, t
    # endpoints of the removed edge that are not re-used lose one degree
    if p != r and p != t and deg[p] <= x_min:
        return False, idx, p, q, r, t
    if q != r and q != t and deg[q] <= x_min:
        return False, idx, p, q, r, t
    swap_edge(nbr, deg, p, q, r, t)
    if _reaches(nbr, deg, q, p, len(seen), seen, queue):
        return True, idx, p, q, r, t
    swap_edge(nbr, deg, r, t, p, q)
    return False, idx, p, q, r, t


@njit(cache=True)
def rewire_loop(
    nbr, deg, edges, n, x_min, a, b, labels, s,
    c, slack, sources, pair_norm,
    max_iters, stall_limit, retry_cap,
    mode, strict, two_ended, t0, decay, seed,
):
    """Run the edge-rewiring search in place.

    Returns (status, iterations, rejected_proposals, f2, dist_sum,
    move_log, value_log, n_accepted, best_edges, best_f2, best_dist).

    ``move_log`` rows are (iteration, edge index, p, q, r, t): edge (p, q)
    was replaced by (r, t).  ``value_log`` rows are (f2, y) after the move.
    """
    np.random.seed(seed)
    seen = np.zeros(n, np.bool_)
    queue = np.empty(n, np.int32)

    f2 = total_f2(nbr, deg, n, a, b, labels, s)
    dist = bitset_distance_sum(nbr, deg, sources, n)
    dev = max(abs(dist / pair_norm - c), slack)

    move_log = np.empty((1024, 6), np.int64)
    value_log = np.empty((1024, 2), np.float64)
    n_acc = 0

    best_edges = edges.copy()
    best_f2 = f2
    best_dist = dist
    best_dev = dev

    new_dist = dist
    new_dev = dev
    cap = nbr.shape[1]
    temp = t0
    since_accept = 0
    rejected = 0
    status = ST_BUDGET
    it = 0
    idx = 0
    p = q = r = t = 0
    while it < max_iters:
        found = False
        for _ in range(retry_cap):
            found, idx, p, q, r, t = _draw_move(nbr, deg, edges, n, x_min, cap, two_ended, seen, queue)
            if found:
                break
            rejected += 1
        if not found:
            status = ST_NO_MOVES
            break
        it += 1
        # the table holds the moved graph; score the move from the old one
        swap_edge(nbr, deg, r, t, p, q)
        df = f2_swap_delta(nbr, deg, p, q, r, t, a, b, labels, s)
        # rounding noise from fractional powers is not an improvement
        if abs(df) <= 1e-12 * max(1.0, abs(f2)):
            df = 0.0
        swap_edge(nbr, deg, p, q, r, t)

        accepted = False
        hopeless = df < 0.0 or (df == 0.0 and (strict or dev <= slack))
        if not (mode == GREEDY and hopeless):
            new_dist = bitset_distance_sum(nbr, deg, sources, n)
            new_dev = max(abs(new_dist / pair_norm - c), slack)
            if strict:
                accepted = df > 0.0 and new_dev < dev
            else:
                accepted = (df > 0.0 and new_dev <= dev) or (df >= 0.0 and new_dev < dev)
            if not accepted and mode == ANNEAL and temp > 0.0:
                penalty = 0.0
                if df < 0.0:
                    penalty += -df / abs(f2) if f2 != 0.0 else -df
                if new_dev > dev:
                    penalty += (new_dev - dev) / c
                if np.random.random() < math.exp(-penalty / temp):
                    accepted = True

        if accepted:
            edges[idx, 0] = r
            edges[idx, 1] = t
            f2 = f2 + df
            dist = new_dist
            dev = new_dev
            move_log = _grow(move_log, n_acc)
            value_log = _grow(value_log, n_acc)
            move_log[n_acc, 0] = it
            move_log[n_acc, 1] = idx
            move_log[n_acc, 2] = p
            move_log[n_acc, 3] = q
            move_log[n_acc, 4] = r
            move_log[n_acc, 5] = t
            value_log[n_acc, 0] = f2
            value_log[n_acc, 1] = dist / pair_norm
            n_acc += 1
            since_accept = 0
            if mode == ANNEAL:
                if dev < best_dev or (dev == best_dev and f2 > best_f2):
                    best_edges[:] = edges
                    best_f2 = f2
                    best_dist = dist
                    best_dev = dev
        else:
            swap_edge(nbr, deg, r, t, p, q)
            since_accept += 1
            if since_accept >= stall_limit:
                status = ST_STALLED
                break
        if mode == ANNEAL and it % 1000 == 0:
            temp *= decay

    if mode == GREEDY:
        best_edges[:] = edges
        best_f2 = f2
        best_dist = dist
    return (status, it, rejected, f2, dist, move_log[:n_acc], value_log[:n_acc],
            n_acc, best_edges, best_f2, best_dist)
