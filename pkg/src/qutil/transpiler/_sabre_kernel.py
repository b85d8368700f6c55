"""Compiled SABRE swap-insertion loop.

Gates are given as two int arrays (``g0``, ``g1``) of virtual operands with
``g1 == -1`` for one-qubit gates.  The layout is a full bijection over the
``n`` physical qubits.  The emitted stream is written to ``out`` rows of
``(kind, gate_index_or_-1, phys_a, phys_b)`` where kind 0 is an original gate
and kind 1 an inserted SWAP.
"""

import numpy as np
from numba import njit, uint64

_MUL = uint64(0x2545F4914F6CDD1D)


@njit(cache=True)
def _next(state):
    x = state[0]
    x ^= x >> uint64(12)
    x ^= x << uint64(25)
    x ^= x >> uint64(27)
    state[0] = x
    return x * _MUL


@njit(cache=True)
def _randbelow(state, n):
    # n is tiny here; modulo bias below 2**-50 is irrelevant but keep it exact
    un = uint64(n)
    limit = uint64(0xFFFFFFFFFFFFFFFF) - (uint64(0xFFFFFFFFFFFFFFFF) % un)
    while True:
        x = _next(state)
        if x < limit:
            return np.int64(x % un)


@njit(cache=True)
def route_kernel(
    g0, g1, v2p, dist, adj_ptr, adj_idx, ext_size, ext_weight,
    decay_delta, decay_reset, valve, seed_state, out,
):
    n_gates = g0.shape[0]
    n = v2p.shape[0]
    p2v = np.empty(n, np.int64)
    for v in range(n):
        p2v[v2p[v]] = v

    # dependency structure: next gate on each operand, predecessor counts
    last = np.full(n, -1, np.int64)
    nxt0 = np.full(n_gates, -1, np.int64)
    nxt1 = np.full(n_gates, -1, np.int64)
    npred = np.zeros(n_gates, np.int64)
    for g in range(n_gates):
        for k in range(2):
            q = g0[g] if k == 0 else g1[g]
            if q < 0:
                continue
            prev = last[q]
            if prev >= 0:
                if g0[prev] == q:
                    nxt0[prev] = g
                else:
                    nxt1[prev] = g
                npred[g] += 1
            last[q] = g

    front = np.empty(n_gates + 1, np.int64)
    nfront = 0
    for g in range(n_gates):
        if npred[g] == 0:
            front[nfront] = g
            nfront += 1

    decay = np.ones(n, np.float64)
    swaps_since_reset = 0
    swaps_since_progress = 0
    n_out = 0
    n_swaps = 0

    ext = np.empty(ext_size, np.int64)
    seen = np.zeros(n_gates, np.int64)
    seen_mark = 0
    bfs = np.empty(n_gates + 1, np.int64)
    cand_a = np.empty(4 * n, np.int64)
    cand_b = np.empty(4 * n, np.int64)
    best = np.empty(4 * n, np.int64)
    path = np.empty(n, np.int64)

    while True:
        # execute everything executable in the front layer
        progressed = True
        while progressed:
            progressed = False
            i = 0
            while i < nfront:
                g = front[i]
                a = g0[g]
                b = g1[g]
                ok = True
                if b >= 0:
                    ok = dist[v2p[a], v2p[b]] == 1
                if ok:
                    out[n_out, 0] = 0
                    out[n_out, 1] = g
                    out[n_out, 2] = v2p[a]
                    out[n_out, 3] = v2p[b] if b >= 0 else -1
                    n_out += 1
                    front[i] = front[nfront - 1]
                    nfront -= 1
                    for s in (nxt0[g], nxt1[g]):
                        if s >= 0:
                            npred[s] -= 1
                            if npred[s] == 0:
                                front[nfront] = s
                                nfront += 1
                    if b >= 0:
                        progressed = True
                        swaps_since_progress = 0
                        decay[:] = 1.0
                        swaps_since_reset = 0
                    else:
                        progressed = True
                else:
                    i += 1
        if nfront == 0:
            break

        if swaps_since_progress >= valve:
            # release valve: bring the closest front gate together along a shortest path
            bg = front[0]
            bd = dist[v2p[g0[bg]], v2p[g1[bg]]]
            for i in range(1, nfront):
                g = front[i]
                d = dist[v2p[g0[g]], v2p[g1[g]]]
                if d < bd or (d == bd and g < bg):
                    bd = d
                    bg = g
            src = v2p[g0[bg]]
            dst = v2p[g1[bg]]
            plen = 0
            cur = src
            while dist[cur, dst] > 1:
                nb = -1
                for j in range(adj_ptr[cur], adj_ptr[cur + 1]):
                    w = adj_idx[j]
                    if dist[w, dst] == dist[cur, dst] - 1:
                        nb = w
                        break
                path[plen] = nb
                plen += 1
                cur = nb
            cur = src
            for j in range(plen):
                nb = path[j]
                va = p2v[cur]
                vb = p2v[nb]
                p2v[cur] = vb
                p2v[nb] = va
                v2p[va] = nb
                v2p[vb] = cur
                out[n_out, 0] = 1
                out[n_out, 1] = -1
                out[n_out, 2] = min(cur, nb)
                out[n_out, 3] = max(cur, nb)
                n_out += 1
                n_swaps += 1
                cur = nb
            decay[:] = 1.0
            swaps_since_reset = 0
            swaps_since_progress = 0
            continue

        # extended set: upcoming two-qubit gates reached through successors
        seen_mark += 1
        n_ext = 0
        head = 0
        tail = 0
        for i in range(nfront):
            bfs[tail] = front[i]
            tail += 1
            seen[front[i]] = seen_mark
        while head < tail and n_ext < ext_size:
            g = bfs[head]
            head += 1
            for s in (nxt0[g], nxt1[g]):
                if s >= 0 and seen[s] != seen_mark:
                    seen[s] = seen_mark
                    if g1[s] >= 0 and n_ext < ext_size:
                        ext[n_ext] = s
                        n_ext += 1
                    bfs[tail] = s
                    tail += 1

        # candidate swaps touching a front-layer qubit
        n_cand = 0
        for i in range(nfront):
            g = front[i]
            for k in range(2):
                p = v2p[g0[g]] if k == 0 else v2p[g1[g]]
                for j in range(adj_ptr[p], adj_ptr[p + 1]):
                    w = adj_idx[j]
                    lo = min(p, w)
                    hi = max(p, w)
                    dup = False
                    for c in range(n_cand):
                        if cand_a[c] == lo and cand_b[c] == hi:
                            dup = True
                            break
                    if not dup:
                        cand_a[n_cand] = lo
                        cand_b[n_cand] = hi
                        n_cand += 1

        best_score = np.inf
        n_best = 0
        for c in range(n_cand):
            pa = cand_a[c]
            pb = cand_b[c]
            fsum = 0.0
            for i in range(nfront):
                g = front[i]
                x = v2p[g0[g]]
                y = v2p[g1[g]]
                if x == pa:
                    x = pb
                elif x == pb:
                    x = pa
                if y == pa:
                    y = pb
                elif y == pb:
                    y = pa
                fsum += dist[x, y]
            score = fsum / nfront
            if n_ext > 0:
                esum = 0.0
                for i in range(n_ext):
                    g = ext[i]
                    x = v2p[g0[g]]
                    y = v2p[g1[g]]
                    if x == pa:
                        x = pb
                    elif x == pb:
                        x = pa
                    if y == pa:
                        y = pb
                    elif y == pb:
                        y = pa
                    esum += dist[x, y]
                score += ext_weight * esum / n_ext
            score *= max(decay[pa], decay[pb])
            if score < best_score - 1e-10:
                best_score = score
                best[0] = c
                n_best = 1
            elif score <= best_score + 1e-10:
                best[n_best] = c
                n_best += 1

        pick = best[_randbelow(seed_state, n_best)] if n_best > 1 else best[0]
        pa = cand_a[pick]
        pb = cand_b[pick]
        va = p2v[pa]
        vb = p2v[pb]
        p2v[pa] = vb
        p2v[pb] = va
        v2p[va] = pb
        v2p[vb] = pa
        out[n_out, 0] = 1
        out[n_out, 1] = -1
        out[n_out, 2] = pa
        out[n_out, 3] = pb
        n_out += 1
        n_swaps += 1
        decay[pa] += decay_delta
        decay[pb] += decay_delta
        swaps_since_reset += 1
        if swaps_since_reset >= decay_reset:
            decay[:] = 1.0
            swaps_since_reset = 0
        swaps_since_progress += 1

    return n_out, n_swaps
