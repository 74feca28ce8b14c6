"""Integer kernels behind audit, the exact solver and the brute-force oracle.

Loop kernels are plain Python over numpy arrays, compiled with numba through
:func:`fairpart._accel.njit` (``fn.py_func`` is the uncompiled body). The
``*_np`` functions are vectorized numpy versions used by the fallback backend.
Arguments are raw arrays and ints so that numba can type them; the public
wrappers live in :mod:`fairpart.audit` and :mod:`fairpart.exact`.

Shared conventions: ``rp`` is a red-count prefix array, a candidate group is
``(s, e]`` and it deviates when one color has ``u`` unhappy points with
``u >= min_unhappy`` and ``2 * u > e - s``.
"""
from __future__ import annotations

import numpy as np

from ._accel import njit

# ---------------------------------------------------------------------------
# audit scan


@njit
def scan_groups(ur, ub, n, lo, hi, min_unhappy, circular, first_only, mask):
    """Mark deviating candidates in ``mask[s, L - lo]`` (bit 1 red, bit 2 blue).

    ``ur``/``ub`` are prefix sums of unhappy red/blue points; on a circle they
    cover the doubled sequence. Returns the number of marks written.
    """
    count = 0
    for s in range(n):
        for L in range(lo, hi + 1):
            e = s + L
            if circular:
                if L > n:
                    break
            elif e > n:
                break
            r = ur[e] - ur[s]
            b = ub[e] - ub[s]
            if r >= min_unhappy and 2 * r > L:
                mask[s, L - lo] |= 1
                count += 1
                if first_only:
                    return count
            if b >= min_unhappy and 2 * b > L:
                mask[s, L - lo] |= 2
                count += 1
                if first_only:
                    return count
    return count


def scan_groups_np(ur, ub, n, lo, hi, min_unhappy, circular):
    starts = np.arange(n)[:, None]
    lengths = np.arange(lo, hi + 1)[None, :]
    ends = starts + lengths
    valid = (lengths <= n) if circular else (ends <= n)
    ends = np.where(valid, ends, starts)
    r = ur[ends] - ur[starts]
    b = ub[ends] - ub[starts]
    red = valid & (r >= min_unhappy) & (2 * r > lengths)
    blue = valid & (b >= min_unhappy) & (2 * b > lengths)
    return red.astype(np.uint8) | (blue.astype(np.uint8) << 1)


# ---------------------------------------------------------------------------
# local window fairness


@njit
def window_ok(rp, bd, nb, e_min, lo, hi, min_unhappy, ur, ub):
    """True iff no allowable group inside ``(bd[0], bd[nb-1]]`` ending after ``e_min`` deviates.

    ``bd[:nb]`` are non-decreasing boundaries of consecutive parts (empty parts
    are ignored); unhappiness is judged against those parts only. ``ur`` and
    ``ub`` are scratch buffers of at least ``bd[nb-1] - bd[0] + 1`` entries.
    """
    first = bd[0]
    last = bd[nb - 1]
    e_start = e_min + 1
    if e_start < first + lo:
        e_start = first + lo
    if e_start > last:
        return True
    # no color has enough unhappy points in the whole window
    tot_r = 0
    tot_b = 0
    for t in range(nb - 1):
        size = bd[t + 1] - bd[t]
        red = rp[bd[t + 1]] - rp[bd[t]]
        if 2 * red > size:
            tot_b += size - red
        else:
            tot_r += red
    if tot_r < min_unhappy and tot_b < min_unhappy:
        return True
    # unhappy red/blue counts on (first, first + k], k = 0..last - first
    span = last - first
    ur[0] = 0
    ub[0] = 0
    for t in range(nb - 1):
        a0 = bd[t]
        b0 = bd[t + 1]
        if b0 <= a0:
            continue
        red = rp[b0] - rp[a0]
        maj_red = 2 * red > b0 - a0
        r_base = ur[a0 - first]
        b_base = ub[a0 - first]
        for k in range(a0 - first + 1, b0 - first + 1):
            is_red = rp[first + k] - rp[first + k - 1]
            if maj_red:
                b_base += 1 - is_red
            else:
                r_base += is_red
            ur[k] = r_base
            ub[k] = b_base
    for e in range(e_start - first, span + 1):
        for L in range(lo, hi + 1):
            s = e - L
            if s < 0:
                break
            u = ur[e] - ur[s]
            if u >= min_unhappy and 2 * u > L:
                return False
            u = ub[e] - ub[s]
            if u >= min_unhappy and 2 * u > L:
                return False
    return True


def windows_ok_np(rp, bd, e_min, lo, hi, min_unhappy, chunk=256):
    """Vectorized :func:`window_ok` over rows of ``bd`` (shape ``(S, k)``)."""
    bd = np.asarray(bd, dtype=np.int64)
    e_min = np.asarray(e_min, dtype=np.int64)
    out = np.ones(bd.shape[0], dtype=bool)
    if bd.shape[0] == 0:
        return out
    e_min = np.broadcast_to(e_min, bd.shape[:1])
    # rows where some color has enough unhappy points in the whole window
    size = np.diff(bd, axis=1)
    red = rp[bd[:, 1:]] - rp[bd[:, :-1]]
    maj_red = 2 * red > size
    tot_r = np.where(maj_red, 0, red).sum(axis=1)
    tot_b = np.where(maj_red, size - red, 0).sum(axis=1)
    rows = np.flatnonzero((tot_r >= min_unhappy) | (tot_b >= min_unhappy))
    lengths = np.arange(lo, hi + 1, dtype=np.int64)[None, None, :]
    for c0 in range(0, rows.size, chunk):
        sel = rows[c0:c0 + chunk]
        B = bd[sel]
        em = e_min[sel]
        last = B[:, -1]
        span = int((last - np.maximum(em, B[:, 0] + lo - 1)).max(initial=0))
        if span <= 0:
            continue
        d = np.arange(span, dtype=np.int64)[None, :, None]
        e = last[:, None, None] - d
        s = e - lengths
        valid = (e > em[:, None, None]) & (s >= B[:, 0][:, None, None])
        e = np.where(valid, e, 0)
        s = np.where(valid, s, 0)
        ur = np.zeros(e.shape, dtype=np.int64)
        ub = np.zeros(e.shape, dtype=np.int64)
        for t in range(B.shape[1] - 1):
            a0 = B[:, t][:, None, None]
            b0 = B[:, t + 1][:, None, None]
            maj_red = 2 * (rp[b0] - rp[a0]) > (b0 - a0)
            a = np.maximum(s, a0)
            b = np.minimum(e, b0)
            ov = b > a
            a = np.where(ov, a, 0)
            b = np.where(ov, b, 0)
            red = rp[b] - rp[a]
            ur += np.where(maj_red, 0, red)
            ub += np.where(maj_red, (b - a) - red, 0)
        dev = valid & (((ur >= min_unhappy) & (2 * ur > lengths))
                       | ((ub >= min_unhappy) & (2 * ub > lengths)))
        out[sel] = ~dev.any(axis=(1, 2))
    return out


@njit
def standalone_table(rp, n, lo, hi, min_unhappy, out):
    """``out[i, a]`` = 1 iff ``(i, i + lo + a]`` has no internal deviating group."""
    bd = np.empty(2, dtype=np.int64)
    ur = np.empty(hi + 1, dtype=np.int64)
    ub = np.empty(hi + 1, dtype=np.int64)
    for i in range(n + 1):
        for a in range(hi - lo + 1):
            j = i + lo + a
            if j > n:
                break
            bd[0] = i
            bd[1] = j
            out[i, a] = 1 if window_ok(rp, bd, 2, i, lo, hi, min_unhappy, ur, ub) else 0


def standalone_table_np(rp, n, lo, hi, min_unhappy):
    W = hi - lo + 1
    out = np.zeros((n + 1, W), dtype=np.uint8)
    i, a = np.meshgrid(np.arange(n + 1), np.arange(W), indexing="ij")
    j = i + lo + a
    keep = j <= n
    bd = np.stack([i[keep], j[keep]], axis=1)
    ok = windows_ok_np(rp, bd, bd[:, 0], lo, hi, min_unhappy)
    out[i[keep], a[keep]] = ok
    return out


# ---------------------------------------------------------------------------
# exact dynamic program over prefixes
#
# table[j, a, b, c] describes a fair balanced partition of (0, j] whose last
# boundaries are i1 = j - lo - a, i2 = i1 - lo - b, i3 = i2 - lo - c. Missing
# boundaries (fewer than four parts) are 0 and then the trailing offsets are 0.
# parent[j, a, b, c] holds the offset c' of the fourth boundary chosen for the
# predecessor state table[i1, b, c, c'].


@njit
def _fill_bounds(bd, i4, i3, i2, i1, j):
    # writes the distinct boundaries i4 <= i3 <= i2 <= i1 < j, returns count
    nb = 0
    prev = -1
    for v in (i4, i3, i2, i1, j):
        if v != prev:
            bd[nb] = v
            nb += 1
            prev = v
    return nb


@njit
def dp_fill(rp, n, lo, hi, min_unhappy, standalone, four, f4, use_f4,
            table, parent, stats):
    """Fill the DP table in increasing ``j``.

    ``four`` selects the general recurrence (one full four-part window check
    per candidate fourth boundary); otherwise the last-three-parts window is
    checked once per state, which is exact whenever a group can touch at most
    three parts. ``use_f4`` reads the precomputed ``f4`` table instead of
    checking windows. ``stats`` receives (states, window checks).
    """
    W = hi - lo + 1
    bd = np.empty(5, dtype=np.int64)
    ur = np.empty(4 * hi + 1, dtype=np.int64)
    ub = np.empty(4 * hi + 1, dtype=np.int64)
    states = 0
    calls = 0
    for j in range(lo, n + 1):
        for a in range(W):
            i1 = j - lo - a
            if i1 < 0:
                break
            if standalone[i1, a] == 0:
                continue
            if i1 == 0:
                states += 1
                table[j, a, 0, 0] = 1
                parent[j, a, 0, 0] = 0
                continue
            for b in range(W):
                i2 = i1 - lo - b
                if i2 < 0:
                    break
                for c in range(W):
                    if i2 == 0:
                        if c > 0:
                            break
                        i3 = 0
                    else:
                        i3 = i2 - lo - c
                        if i3 < 0:
                            break
                    states += 1
                    if not four:
                        best = -1
                        for cp in range(W - 1, -1, -1):
                            if table[i1, b, c, cp]:
                                best = cp
                                break
                        if best < 0:
                            continue
                        nb = _fill_bounds(bd, i3, i3, i2, i1, j)
                        calls += 1
                        if window_ok(rp, bd, nb, i1, lo, hi, min_unhappy, ur, ub):
                            table[j, a, b, c] = 1
                            parent[j, a, b, c] = best
                    else:
                        for cp in range(W - 1, -1, -1):
                            if table[i1, b, c, cp] == 0:
                                continue
                            if use_f4:
                                ok = f4[j, a, b, c, cp] != 0
                            else:
                                i4 = i3 - lo - cp if i3 > 0 else 0
                                nb = _fill_bounds(bd, i4, i3, i2, i1, j)
                                calls += 1
                                ok = window_ok(rp, bd, nb, i1, lo, hi, min_unhappy, ur, ub)
                            if ok:
                                table[j, a, b, c] = 1
                                parent[j, a, b, c] = cp
                                break
    stats[0] = states
    stats[1] = calls


@njit
def fair4_table(rp, n, lo, hi, min_unhappy, f4, stats):
    """Precompute the four-part window verdict for every encodable tuple."""
    W = hi - lo + 1
    bd = np.empty(5, dtype=np.int64)
    ur = np.empty(4 * hi + 1, dtype=np.int64)
    ub = np.empty(4 * hi + 1, dtype=np.int64)
    calls = 0
    for j in range(lo, n + 1):
        for a in range(W):
            i1 = j - lo - a
            if i1 <= 0:
                break
            for b in range(W):
                i2 = i1 - lo - b
                if i2 < 0:
                    break
                for c in range(W):
                    if i2 == 0:
                        if c > 0:
                            break
                        i3 = 0
                    else:
                        i3 = i2 - lo - c
                        if i3 < 0:
                            break
                    for cp in range(W):
                        if i3 == 0:
                            if cp > 0:
                                break
                            i4 = 0
                        else:
                            i4 = i3 - lo - cp
                            if i4 < 0:
                                break
                        nb = _fill_bounds(bd, i4, i3, i2, i1, j)
                        calls += 1
                        if window_ok(rp, bd, nb, bd[0], lo, hi, min_unhappy, ur, ub):
                            f4[j, a, b, c, cp] = 1
    stats[1] = calls


def _state_grid(W):
    a, b, c = np.meshgrid(np.arange(W), np.arange(W), np.arange(W), indexing="ij")
    return a.ravel(), b.ravel(), c.ravel()


def dp_fill_np(rp, n, lo, hi, min_unhappy, standalone, four, table, parent, stats):
    """Row-vectorized :func:`dp_fill` for the numpy backend (no precomputed ``f4``)."""
    W = hi - lo + 1
    A, B, C = _state_grid(W)
    cps = np.arange(W - 1, -1, -1)
    states = 0
    calls = 0
    for j in range(lo, n + 1):
        i1 = j - lo - A
        i2 = i1 - lo - B
        i3 = np.where(i2 > 0, i2 - lo - C, 0)
        single = (i1 == 0) & (B == 0) & (C == 0)
        multi = (i1 > 0) & (i2 >= 0) & (((i2 == 0) & (C == 0)) | ((i2 > 0) & (i3 >= 0)))
        valid = single | multi
        i1c = np.where(valid, i1, 0)
        fair_last = np.zeros(A.size, dtype=bool)
        fair_last[valid] = standalone[i1c[valid], A[valid]] != 0
        states += int(fair_last.sum())

        first = single & fair_last
        table[j, A[first], 0, 0] = 1
        parent[j, A[first], 0, 0] = 0

        idx = np.flatnonzero(multi & fair_last)
        if idx.size == 0:
            continue
        # predecessor rows, columns ordered from smallest fourth boundary
        pred = table[i1[idx], B[idx], C[idx]][:, cps] != 0
        if not four:
            has = pred.any(axis=1)
            idx = idx[has]
            if idx.size == 0:
                continue
            best = cps[pred[has].argmax(axis=1)]
            bd = np.stack([i3[idx], i2[idx], i1[idx], np.full(idx.size, j)], axis=1)
            calls += idx.size
            ok = windows_ok_np(rp, bd, i1[idx], lo, hi, min_unhappy)
            table[j, A[idx[ok]], B[idx[ok]], C[idx[ok]]] = 1
            parent[j, A[idx[ok]], B[idx[ok]], C[idx[ok]]] = best[ok]
        else:
            rows, cols = np.nonzero(pred)
            if rows.size == 0:
                continue
            st = idx[rows]
            cp = cps[cols]
            i4 = np.where(i3[st] > 0, i3[st] - lo - cp, 0)
            bd = np.stack([i4, i3[st], i2[st], i1[st], np.full(st.size, j)], axis=1)
            calls += st.size
            ok = windows_ok_np(rp, bd, i1[st], lo, hi, min_unhappy)
            # rows are sorted and within a row columns go from smallest i4
            st_ok, first_pos = np.unique(st[ok], return_index=True)
            cp_ok = cp[ok][first_pos]
            table[j, A[st_ok], B[st_ok], C[st_ok]] = 1
            parent[j, A[st_ok], B[st_ok], C[st_ok]] = cp_ok
    stats[0] = states
    stats[1] = calls


# ---------------------------------------------------------------------------
# brute-force oracle: depth-first enumeration of compositions


@njit
def composition_search(is_red, n, lo, hi, min_unhappy, circular, sizes, stats):
    """First balanced fair composition of ``n`` in lexicographic boundary order.

    Part sizes are tried smallest first. A branch is cut as soon as a group
    lying entirely inside the already-fixed prefix deviates, which no later
    choice can repair. On a circle the wrapped groups are checked once the
    composition is complete. Writes part sizes to ``sizes`` and returns their
    count, or -1 when no composition is fair. ``stats[0]`` counts visited nodes.
    """
    ur = np.zeros(n + 1, dtype=np.int64)
    ub = np.zeros(n + 1, dtype=np.int64)
    pos = np.zeros(n + 2, dtype=np.int64)
    trial = np.zeros(n + 2, dtype=np.int64)
    depth = 0
    trial[0] = lo
    nodes = 0
    while depth >= 0:
        L = trial[depth]
        start = pos[depth]
        end = start + L
        if L > hi or end > n:
            depth -= 1
            if depth >= 0:
                trial[depth] += 1
            continue
        nodes += 1
        red_here = 0
        for k in range(start, end):
            red_here += is_red[k]
        maj_red = 2 * red_here > L
        for k in range(start, end):
            if is_red[k] == 1 and not maj_red:
                ur[k + 1] = ur[k] + 1
            else:
                ur[k + 1] = ur[k]
            if is_red[k] == 0 and maj_red:
                ub[k + 1] = ub[k] + 1
            else:
                ub[k + 1] = ub[k]
        ok = True
        for e in range(start + 1, end + 1):
            for Ld in range(lo, hi + 1):
                s = e - Ld
                if s < 0:
                    break
                r = ur[e] - ur[s]
                b = ub[e] - ub[s]
                if (r >= min_unhappy and 2 * r > Ld) or (b >= min_unhappy and 2 * b > Ld):
                    ok = False
                    break
            if not ok:
                break
        if ok and end == n and circular:
            for s in range(n):
                for Ld in range(lo, hi + 1):
                    if Ld > n:
                        break
                    if s + Ld <= n:
                        continue
                    r = ur[n] - ur[s] + ur[s + Ld - n]
                    b = ub[n] - ub[s] + ub[s + Ld - n]
                    if (r >= min_unhappy and 2 * r > Ld) or (b >= min_unhappy and 2 * b > Ld):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            sizes[depth] = L
            if end == n:
                stats[0] = nodes
                return depth + 1
            depth += 1
            pos[depth] = end
            trial[depth] = lo
            continue
        trial[depth] += 1
    stats[0] = nodes
    return -1
