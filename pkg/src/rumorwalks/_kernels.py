"""numba kernels for the hot loops.

Everything here mirrors a pure-Python counterpart exactly:

  rng           xoshiro256** seeded via splitmix64, bit-identical to rng.Stream
  movement      same draw pattern as topology.sample_move
  closure       per-node occupancy buckets, same outcome as a pairwise scan

Topology kinds are encoded as integers (KIND_CODES).  All RNG state is
uint64; constants are wrapped in np.uint64 because mixing int64 into
uint64 arithmetic would silently promote to float64 under numba.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U = np.uint64

KIND_CODES = {"grid_selfloop": 0, "torus": 1, "ring": 2}

GOLDEN_U = U(0x9E3779B97F4A7C15)
INV53 = 1.0 / 9007199254740992.0


@njit(cache=True, nogil=True, inline="always")
def _mix64(x):
    x = (x ^ (x >> U(30))) * U(0xBF58476D1CE4E5B9)
    x = (x ^ (x >> U(27))) * U(0x94D049BB133111EB)
    return x ^ (x >> U(31))


@njit(cache=True, nogil=True, inline="always")
def _seed_row(states, row, master, index):
    # substream seed, then 4 splitmix64 outputs as xoshiro state
    s = _mix64(master + GOLDEN_U * (index + U(1)))
    for j in range(4):
        s = s + GOLDEN_U
        states[row, j] = _mix64(s)


@njit(cache=True, nogil=True)
def seed_states(states, master, first_index):
    """Row i of states becomes substream (first_index + i) of master."""
    for i in range(states.shape[0]):
        _seed_row(states, i, master, first_index + U(i))


@njit(cache=True, nogil=True, inline="always")
def _rng_next(states, i):
    s1 = states[i, 1]
    out = ((s1 * U(5)) << U(7) | (s1 * U(5)) >> U(57)) * U(9)
    t = s1 << U(17)
    s0 = states[i, 0]
    s2 = states[i, 2]
    s3 = states[i, 3]
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = (s3 << U(45)) | (s3 >> U(19))
    states[i, 0] = s0
    states[i, 1] = s1
    states[i, 2] = s2
    states[i, 3] = s3
    return out


@njit(cache=True, nogil=True)
def draw_words(master, index, out):
    states = np.empty((1, 4), np.uint64)
    _seed_row(states, 0, master, index)
    for j in range(out.shape[0]):
        out[j] = _rng_next(states, 0)


@njit(cache=True, nogil=True)
def fill_uniforms(master, index, out):
    states = np.empty((1, 4), np.uint64)
    _seed_row(states, 0, master, index)
    for j in range(out.shape[0]):
        out[j] = (_rng_next(states, 0) >> U(11)) * INV53


@njit(cache=True, nogil=True, inline="always")
def _move_idx(states, i, idx, kind, side, lazy):
    if lazy > 0.0:
        if (_rng_next(states, i) >> U(11)) * INV53 < lazy:
            return idx
    r = _rng_next(states, i)
    if kind == 2:
        if r % U(2) == U(0):
            nx = idx + 1
            if nx == side:
                nx = 0
            return nx
        nx = idx - 1
        if nx < 0:
            nx = side - 1
        return nx
    d = r % U(4)
    x = idx % side
    y = idx // side
    if d == U(0):
        x2 = x + 1
        y2 = y
    elif d == U(1):
        x2 = x - 1
        y2 = y
    elif d == U(2):
        x2 = x
        y2 = y + 1
    else:
        x2 = x
        y2 = y - 1
    if kind == 0:
        if x2 < 0 or x2 >= side or y2 < 0 or y2 >= side:
            return idx
        return y2 * side + x2
    if x2 == side:
        x2 = 0
    elif x2 < 0:
        x2 = side - 1
    if y2 == side:
        y2 = 0
    elif y2 < 0:
        y2 = side - 1
    return y2 * side + x2


@njit(cache=True, nogil=True)
def walk_path(kind, side, lazy, master, sidx, start_idx, out):
    """Single-walk trajectory, used to pin kernels against sample_move."""
    states = np.empty((1, 4), np.uint64)
    _seed_row(states, 0, master, sidx)
    idx = start_idx
    for s in range(out.shape[0]):
        idx = _move_idx(states, 0, idx, kind, side, lazy)
        out[s] = idx


@njit(cache=True, nogil=True, inline="always")
def _l1_from(kind, side, idx, x0, y0):
    if kind == 2:
        dx = idx - x0
        if dx < 0:
            dx = -dx
        if side - dx < dx:
            dx = side - dx
        return dx
    x = idx % side
    y = idx // side
    dx = x - x0
    if dx < 0:
        dx = -dx
    dy = y - y0
    if dy < 0:
        dy = -dy
    if kind == 1:
        if side - dx < dx:
            dx = side - dx
        if side - dy < dy:
            dy = side - dy
    return dx + dy


# ---------------------------------------------------------------------------
# closure passes


@njit(cache=True, nogil=True)
def closure_broadcast(t, pos, informed, informed_t, stamp, head, nxt, occ):
    """Per-node infection closure; returns how many agents flipped.

    Buckets are a stamp-dated linked list, so no O(n) clearing between
    steps: stamp[v] records the last step v was occupied.
    """
    k = pos.shape[0]
    nocc = 0
    newly = 0
    for i in range(k):
        v = pos[i]
        if stamp[v] != t:
            stamp[v] = t
            head[v] = i
            nxt[i] = -1
            occ[nocc] = v
            nocc += 1
        else:
            nxt[i] = head[v]
            head[v] = i
    for j in range(nocc):
        v = occ[j]
        i = head[v]
        if nxt[i] == -1:
            continue
        any_inf = False
        while i != -1:
            if informed[i]:
                any_inf = True
                break
            i = nxt[i]
        if not any_inf:
            continue
        i = head[v]
        while i != -1:
            if not informed[i]:
                informed[i] = True
                informed_t[i] = t
                newly += 1
            i = nxt[i]
    return newly


@njit(cache=True, nogil=True)
def closure_gossip(t, pos, rumors, counts, per_rumor_time, informed, informed_t,
                   stamp, head, nxt, occ, uw):
    """Union rumor sets per occupied node; returns newly learned (agent, rumor) pairs.

    informed[] tracks possession of rumor 0 (the tracked rumor) so the
    frontier and cell instrumentation can reuse the broadcast machinery.
    """
    k = pos.shape[0]
    W = rumors.shape[1]
    nocc = 0
    for i in range(k):
        v = pos[i]
        if stamp[v] != t:
            stamp[v] = t
            head[v] = i
            nxt[i] = -1
            occ[nocc] = v
            nocc += 1
        else:
            nxt[i] = head[v]
            head[v] = i
    total_new = 0
    for j in range(nocc):
        v = occ[j]
        i0 = head[v]
        if nxt[i0] == -1:
            continue
        for w in range(W):
            uw[w] = U(0)
        i = i0
        while i != -1:
            for w in range(W):
                uw[w] |= rumors[i, w]
            i = nxt[i]
        i = i0
        while i != -1:
            for w in range(W):
                new = uw[w] & ~rumors[i, w]
                if new != U(0):
                    rumors[i, w] = uw[w]
                    while new != U(0):
                        b = new & (U(0) - new)
                        new ^= b
                        p = 0
                        bb = b
                        if bb & U(0xFFFFFFFF00000000) != U(0):
                            p += 32
                            bb >>= U(32)
                        if bb & U(0xFFFF0000) != U(0):
                            p += 16
                            bb >>= U(16)
                        if bb & U(0xFF00) != U(0):
                            p += 8
                            bb >>= U(8)
                        if bb & U(0xF0) != U(0):
                            p += 4
                            bb >>= U(4)
                        if bb & U(0xC) != U(0):
                            p += 2
                            bb >>= U(2)
                        if bb & U(0x2) != U(0):
                            p += 1
                        r = w * 64 + p
                        counts[r] += 1
                        total_new += 1
                        if counts[r] == k:
                            per_rumor_time[r] = t
            if not informed[i] and (rumors[i, 0] & U(1)) != U(0):
                informed[i] = True
                informed_t[i] = t
            i = nxt[i]
    return total_new


# ---------------------------------------------------------------------------
# per-step instrumentation


@njit(cache=True, nogil=True)
def frontier_scan(pos, informed, side):
    """Rightmost informed agent: max x, ties to max y, then lowest index."""
    bx = -1
    by = -1
    for i in range(pos.shape[0]):
        if informed[i]:
            x = pos[i] % side + 1
            y = pos[i] // side + 1
            if x > bx or (x == bx and y > by):
                bx = x
                by = y
    return bx, by


@njit(cache=True, nogil=True)
def cells_scan(t, pos, informed, side, cell_side, ncx,
               first_reached, memb_start, memb_len, memb_buf, memb_used):
    """Record first-reach events and snapshot cell occupants at that instant.

    Returns (memb_used, overflow).  Overflow only marks that some
    member lists were truncated; reach times stay exact.
    """
    k = pos.shape[0]
    cap = memb_buf.shape[0]
    overflow = 0
    for i in range(k):
        if not informed[i]:
            continue
        x = pos[i] % side
        y = pos[i] // side
        c = (y // cell_side) * ncx + (x // cell_side)
        if first_reached[c] >= 0:
            continue
        first_reached[c] = t
        memb_start[c] = memb_used
        cnt = 0
        for j in range(k):
            xj = pos[j] % side
            yj = pos[j] // side
            if (yj // cell_side) * ncx + (xj // cell_side) == c:
                if memb_used < cap:
                    memb_buf[memb_used] = j
                    memb_used += 1
                    cnt += 1
                else:
                    overflow = 1
        memb_len[c] = cnt
    return memb_used, overflow


# ---------------------------------------------------------------------------
# scenario chunk loops


@njit(cache=True, nogil=True)
def broadcast_chunk(kind, side, lazy, max_steps, chunk,
                    t, informed_count,
                    pos, mobile, informed, informed_t, states,
                    stamp, head, nxt, occ,
                    do_frontier, fx, fy,
                    do_cells, cell_side, ncx,
                    first_reached, memb_start, memb_len, memb_buf, memb_used):
    """Advance up to `chunk` steps; stops early on completion or max_steps.

    Returns (t, informed_count, steps_done, memb_used, overflow).
    """
    k = pos.shape[0]
    steps = 0
    overflow = 0
    while informed_count < k and steps < chunk and t < max_steps:
        t += 1
        steps += 1
        for i in range(k):
            if mobile[i]:
                pos[i] = _move_idx(states, i, pos[i], kind, side, lazy)
        informed_count += closure_broadcast(t, pos, informed, informed_t,
                                            stamp, head, nxt, occ)
        for i in range(k):
            mobile[i] = informed[i]
        if do_frontier == 1:
            bx, by = frontier_scan(pos, informed, side)
            fx[steps - 1] = bx
            fy[steps - 1] = by
        if do_cells == 1:
            memb_used, ov = cells_scan(t, pos, informed, side, cell_side, ncx,
                                       first_reached, memb_start, memb_len,
                                       memb_buf, memb_used)
            if ov == 1:
                overflow = 1
    return t, informed_count, steps, memb_used, overflow


@njit(cache=True, nogil=True)
def gossip_chunk(kind, side, lazy, max_steps, chunk,
                 t, total_pairs,
                 pos, rumors, counts, per_rumor_time, informed, informed_t, states,
                 stamp, head, nxt, occ, uw,
                 do_frontier, fx, fy,
                 do_cells, cell_side, ncx,
                 first_reached, memb_start, memb_len, memb_buf, memb_used):
    """Gossip counterpart of broadcast_chunk; everyone moves every step.

    Returns (t, total_pairs, steps_done, memb_used, overflow).
    """
    k = pos.shape[0]
    target = k * k
    steps = 0
    overflow = 0
    while total_pairs < target and steps < chunk and t < max_steps:
        t += 1
        steps += 1
        for i in range(k):
            pos[i] = _move_idx(states, i, pos[i], kind, side, lazy)
        total_pairs += closure_gossip(t, pos, rumors, counts, per_rumor_time,
                                      informed, informed_t,
                                      stamp, head, nxt, occ, uw)
        if do_frontier == 1:
            bx, by = frontier_scan(pos, informed, side)
            fx[steps - 1] = bx
            fy[steps - 1] = by
        if do_cells == 1:
            memb_used, ov = cells_scan(t, pos, informed, side, cell_side, ncx,
                                       first_reached, memb_start, memb_len,
                                       memb_buf, memb_used)
            if ov == 1:
                overflow = 1
    return t, total_pairs, steps, memb_used, overflow


# ---------------------------------------------------------------------------
# Monte Carlo estimators


@njit(cache=True, nogil=True)
def pair_meet_mc(kind, side, lazy, a0, b0, horizon, trials, master):
    """Count trials where two walks co-locate at some t <= horizon."""
    states = np.empty((2, 4), np.uint64)
    hits = 0
    for trial in range(trials):
        _seed_row(states, 0, master, U(2 * trial))
        _seed_row(states, 1, master, U(2 * trial + 1))
        a = a0
        b = b0
        met = a == b
        t = 0
        while not met and t < horizon:
            t += 1
            a = _move_idx(states, 0, a, kind, side, lazy)
            b = _move_idx(states, 1, b, kind, side, lazy)
            met = a == b
        if met:
            hits += 1
    return hits


@njit(cache=True, nogil=True)
def walk_stats_mc(kind, side, n, lazy, v0, ell, trials, master,
                  thresholds, exceed, distinct):
    """Max-deviation threshold counts and distinct-node counts per trial.

    thresholds holds the distances lambda*sqrt(ell); exceed[j] counts
    trials whose max L1 deviation from v0 reached thresholds[j].
    """
    states = np.empty((1, 4), np.uint64)
    visited = np.full(n, -1, np.int64)
    x0 = v0 % side
    y0 = v0 // side
    if kind == 2:
        x0 = v0
        y0 = 0
    for trial in range(trials):
        _seed_row(states, 0, master, U(trial))
        idx = v0
        visited[idx] = trial
        cnt = 1
        maxd = 0
        for _ in range(ell):
            idx = _move_idx(states, 0, idx, kind, side, lazy)
            if visited[idx] != trial:
                visited[idx] = trial
                cnt += 1
            d = _l1_from(kind, side, idx, x0, y0)
            if d > maxd:
                maxd = d
        distinct[trial] = cnt
        for j in range(thresholds.shape[0]):
            if maxd >= thresholds[j]:
                exceed[j] += 1


@njit(cache=True, nogil=True)
def cover_mc(kind, side, n, lazy, trials, master, cap, out):
    """First time a single walk from a uniform start has visited every node.

    out[trial] = cover time, or -1 if cap steps pass first.
    """
    states = np.empty((1, 4), np.uint64)
    visited = np.full(n, -1, np.int64)
    for trial in range(trials):
        _seed_row(states, 0, master, U(trial))
        idx = np.int64(_rng_next(states, 0) % U(n))
        visited[idx] = trial
        remaining = n - 1
        t = 0
        while remaining > 0 and t < cap:
            t += 1
            idx = _move_idx(states, 0, idx, kind, side, lazy)
            if visited[idx] != trial:
                visited[idx] = trial
                remaining -= 1
        out[trial] = t if remaining == 0 else -1
