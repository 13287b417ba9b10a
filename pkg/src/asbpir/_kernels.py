"""Compiled inner loops.

Recovery sets are int64 bitmasks over column indices (n <= 62).  A serving
problem is a list of groups; group ``g`` asks for ``need[g]`` pairwise
disjoint sets drawn from ``masks[starts[g]:ends[g]]``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

ASPIR = 0
ASBATCH = 1


@njit(cache=True)
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(cache=True)
def _select_group(masks, sizes, starts, ends, rem, last, used, free):
    """Fail-first choice: the open group with the fewest usable sets, or -1 on a dead end."""
    best = -1
    best_count = 1 << 62
    demand = 0
    for g in range(rem.size):
        if rem[g] == 0:
            continue
        count = 0
        smallest = 1 << 62
        for p in range(last[g] + 1, ends[g]):
            if masks[p] & used == 0:
                count += 1
                if sizes[p] < smallest:
                    smallest = sizes[p]
        if count < rem[g]:
            return -1
        demand += rem[g] * smallest
        if count < best_count:
            best_count = count
            best = g
    if demand > free:
        return -1
    return best


@njit(cache=True)
def serve_groups(masks, sizes, starts, ends, need, universe):
    """Pick ``need[g]`` pairwise disjoint sets per group, all disjoint overall.

    Returns ``(ok, chosen)`` where ``chosen`` lists the selected mask
    positions depth by depth.  Sets assigned to one group are taken in
    increasing position, which removes the symmetry between identical
    request units without losing completeness.
    """
    total = 0
    for g in range(need.size):
        total += need[g]
    chosen = np.full(total, -1, dtype=np.int64)
    group_at = np.full(total, -1, dtype=np.int64)
    prev_last = np.zeros(total, dtype=np.int64)
    last = starts - 1
    rem = need.copy()
    used = np.int64(0)
    free_total = popcount(universe)
    depth = 0
    entering = True
    while True:
        if entering:
            if depth == total:
                return True, chosen
            g = _select_group(masks, sizes, starts, ends, rem, last, used, free_total - popcount(used))
            if g < 0:
                if depth == 0:
                    return False, chosen
                depth -= 1
                entering = False
                continue
            group_at[depth] = g
            pos = last[g] + 1
        else:
            g = group_at[depth]
            p = chosen[depth]
            used ^= masks[p]
            rem[g] += 1
            last[g] = prev_last[depth]
            pos = p + 1
        end = ends[g]
        while pos < end and (masks[pos] & used) != 0:
            pos += 1
        if pos >= end:
            chosen[depth] = -1
            if depth == 0:
                return False, chosen
            depth -= 1
            entering = False
            continue
        chosen[depth] = pos
        prev_last[depth] = last[g]
        last[g] = pos
        used |= masks[pos]
        rem[g] -= 1
        depth += 1
        entering = True


@njit(cache=True)
def _next_colex(a, m):
    """Advance a nondecreasing tuple over ``range(m)`` in colex order; False when done."""
    t = a.size
    for i in range(t):
        if i == t - 1:
            if a[i] < m - 1:
                a[i] += 1
                for j in range(i):
                    a[j] = 0
                return True
            return False
        if a[i] < a[i + 1]:
            a[i] += 1
            for j in range(i):
                a[j] = 0
            return True
    return False


@njit(cache=True)
def all_column_requests(masks, sizes, starts, ends, reps, t, universe):
    """Serve every size-``t`` multiset over ``reps`` (colex order).

    Returns the first failing multiset (as positions into ``reps``) or an
    empty array when every request is servable, plus the number served.
    """
    m = reps.size
    a = np.zeros(t, dtype=np.int64)
    served = 0
    g_starts = np.empty(t, dtype=np.int64)
    g_ends = np.empty(t, dtype=np.int64)
    g_need = np.empty(t, dtype=np.int64)
    while True:
        ng = 0
        for i in range(t):
            if i > 0 and a[i] == a[i - 1]:
                g_need[ng - 1] += 1
            else:
                c = reps[a[i]]
                g_starts[ng] = starts[c]
                g_ends[ng] = ends[c]
                g_need[ng] = 1
                ng += 1
        ok, _ = serve_groups(masks, sizes, g_starts[:ng], g_ends[:ng], g_need[:ng], universe)
        if not ok:
            return a.copy(), served
        served += 1
        if not _next_colex(a, m):
            return np.zeros(0, dtype=np.int64), served


# ----------------------------------------------------------------------------
# systematic candidate search


@njit(cache=True)
def _vec_scale(alpha, u, q, k, pw, mul_t, char2):
    if alpha == 1:
        return u
    out = 0
    for i in range(k):
        d = (u // pw[i]) % q
        out += mul_t[alpha, d] * pw[i]
    return out


@njit(cache=True)
def _vec_add(u, w, q, k, pw, add_t, char2):
    if char2:
        return u ^ w
    out = 0
    for i in range(k):
        out += add_t[(u // pw[i]) % q, (w // pw[i]) % q] * pw[i]
    return out


@njit(cache=True)
def _row_mask(u, q, k, pw, binary):
    if binary:
        return u
    mask = 0
    for i in range(k):
        if (u // pw[i]) % q != 0:
            mask |= np.int64(1) << i
    return mask


@njit(cache=True)
def dual_supports(a_cols, k, q, pw, add_t, mul_t, char2, binary, norm_idx, norm_cmask, sums, out):
    """Support masks of the dual codewords of ``(I_k | A)``, one per projective class.

    The dual is spanned by the rows of ``(-A^T | I_m)``; the codeword for
    coefficient vector ``c`` is ``(-A c, c)``, whose support is
    ``supp(A c)`` on the first ``k`` coordinates and ``supp(c)`` after them.
    """
    m = a_cols.size
    sums[0] = 0
    block = 1
    for j in range(m):
        for alpha in range(1, q):
            s = _vec_scale(alpha, a_cols[j], q, k, pw, mul_t, char2)
            base = alpha * block
            for r in range(block):
                sums[base + r] = _vec_add(sums[r], s, q, k, pw, add_t, char2)
        block *= q
    for i in range(norm_idx.size):
        out[i] = _row_mask(sums[norm_idx[i]], q, k, pw, binary) | (norm_cmask[i] << k)
    return norm_idx.size


@njit(cache=True)
def build_families(supports, nsup, n, fam, sizes, starts, ends):
    """Recovery-set families per column: the singleton, then ``supp(x) - {i}`` for duals through ``i``."""
    pos = 0
    for i in range(n):
        bit = np.int64(1) << i
        starts[i] = pos
        fam[pos] = bit
        sizes[pos] = 1
        pos += 1
        for s in range(nsup):
            x = supports[s]
            if x & bit:
                fam[pos] = x ^ bit
                sizes[pos] = popcount(x ^ bit)
                pos += 1
        ends[i] = pos
    return pos


@njit(cache=True)
def _classes(cols, n, reps, counts):
    """Distinct column codes: representatives (first index) and multiplicities."""
    nr = 0
    for j in range(n):
        found = -1
        for r in range(nr):
            if cols[reps[r]] == cols[j]:
                found = r
                break
        if found < 0:
            reps[nr] = j
            counts[nr] = 1
            nr += 1
        else:
            counts[found] += 1
    return nr


@njit(cache=True)
def _aspir_ok(fam, sizes, starts, ends, reps, nr, t, universe):
    need = np.full(1, t, dtype=np.int64)
    st = np.empty(1, dtype=np.int64)
    en = np.empty(1, dtype=np.int64)
    for r in range(nr):
        c = reps[r]
        st[0] = starts[c]
        en[0] = ends[c]
        ok, _ = serve_groups(fam, sizes, st, en, need, universe)
        if not ok:
            return False
    return True


@njit(cache=True)
def search_shard(
    points,
    first,
    k,
    n,
    q,
    t,
    kind,
    pw,
    add_t,
    mul_t,
    char2,
    binary,
    norm_idx,
    norm_cmask,
    stop_at_first,
    both,
):
    """Examine every canonical candidate whose smallest free column is ``points[first]``.

    ``stats`` = [examined, rejected_repetition, rejected_counting,
    rejected_aspir, rejected_asbatch, accepted, aspir_pass, asbatch_pass,
    equivalence_mismatch].  With ``both`` set, ASBATCH is evaluated on every
    ASPIR-passing candidate regardless of ``kind``.
    """
    m = n - k
    npts = points.size
    stats = np.zeros(9, dtype=np.int64)
    witness = np.zeros(0, dtype=np.int64)
    cols = np.empty(n, dtype=np.int64)
    for i in range(k):
        cols[i] = pw[i]
    universe = (np.int64(1) << n) - 1
    qm = 1
    for _ in range(m):
        qm *= q
    sums = np.empty(qm, dtype=np.int64)
    supports = np.empty(norm_idx.size, dtype=np.int64)
    cap = n * (norm_idx.size + 1)
    fam = np.empty(cap, dtype=np.int64)
    sizes = np.empty(cap, dtype=np.int64)
    starts = np.empty(n, dtype=np.int64)
    ends = np.empty(n, dtype=np.int64)
    reps = np.empty(n, dtype=np.int64)
    counts = np.empty(n, dtype=np.int64)
    b = np.full(m, first, dtype=np.int64)
    if m == 0:
        npts = 1
    while True:
        stats[0] += 1
        for j in range(m):
            cols[k + j] = points[b[j]]
        nr = _classes(cols, n, reps, counts)
        reject = 0
        for r in range(nr):
            if counts[r] > t:
                reject = 1
                break
        if reject == 0:
            for r in range(nr):
                if counts[r] < t and n < counts[r] + 2 * (t - counts[r]):
                    reject = 2
                    break
        if reject == 1:
            stats[1] += 1
        elif reject == 2:
            stats[2] += 1
        else:
            nsup = dual_supports(cols[k:], k, q, pw, add_t, mul_t, char2, binary, norm_idx, norm_cmask, sums, supports)
            build_families(supports, nsup, n, fam, sizes, starts, ends)
            p_ok = _aspir_ok(fam, sizes, starts, ends, reps, nr, t, universe)
            b_ok = False
            if p_ok:
                stats[6] += 1
                if kind == ASBATCH or both:
                    bad, _ = all_column_requests(fam, sizes, starts, ends, reps[:nr], t, universe)
                    b_ok = bad.size == 0
                    if b_ok:
                        stats[7] += 1
                    else:
                        stats[8] += 1
            accepted = p_ok if kind == ASPIR else b_ok
            if not p_ok:
                stats[3] += 1
            elif not accepted:
                stats[4] += 1
            else:
                stats[5] += 1
                if witness.size == 0:
                    witness = cols.copy()
                if stop_at_first:
                    return stats, witness
        # advance to the next nondecreasing tuple with b[0] fixed
        if m <= 1:
            return stats, witness
        j = m - 1
        while j >= 1 and b[j] == npts - 1:
            j -= 1
        if j == 0:
            return stats, witness
        v = b[j] + 1
        for i in range(j, m):
            b[i] = v
