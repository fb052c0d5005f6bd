"""Integer kernels behind the combinatorial searches.

Each kernel has a numba implementation and a vectorized numpy implementation
with identical results; the public wrappers pick one according to
:data:`hodgedeg._accel.USE_NUMBA` unless ``backend`` is given explicitly.
"""

from __future__ import annotations

import numpy as np

from . import _accel
from ._accel import njit

__all__ = ["weight_assignment_search", "cover_nerve", "pack_masks"]


# ---------------------------------------------------------------------------
# exhaustive search over coordinate filtrations in a Jordan basis
#
# Basis vector (b, t) of a Jordan chain of length s has N e_{b,t} = e_{b,t-1}
# and N e_{b,0} = 0.  A weight assignment w defines the coordinate filtration
# M_k = span{e : w(e) <= k}.


def _chain_tables(chain_lengths):
    lengths = np.asarray(chain_lengths, dtype=np.int64)
    d = int(lengths.sum())
    # prev[i] = index of N e_i, or -1
    prev = np.full(d, -1, dtype=np.int64)
    depth = np.zeros(d, dtype=np.int64)
    start = 0
    for s in lengths:
        for t in range(int(s)):
            depth[start + t] = t
            if t > 0:
                prev[start + t] = start + t - 1
        start += int(s)
    return prev, depth


@njit(cache=True)
def _search_nb(prev, depth, lo, hi, center, max_l):
    d = prev.shape[0]
    width = hi - lo + 1
    w = np.full(d, lo, dtype=np.int64)
    count = 0
    first = np.zeros(d, dtype=np.int64)
    total = 1
    for _ in range(d):
        total *= width
    for _ in range(total):
        ok = True
        # N M_k inside M_{k-2}
        for i in range(d):
            p = prev[i]
            if p >= 0 and w[p] > w[i] - 2:
                ok = False
                break
        if ok:
            for l in range(1, max_l + 1):
                up = 0
                down = 0
                for i in range(d):
                    if w[i] == center - l:
                        down += 1
                    if w[i] == center + l:
                        up += 1
                        if depth[i] < l:
                            ok = False
                            break
                        j = i - l
                        if w[j] != center - l:
                            ok = False
                            break
                if not ok or up != down:
                    ok = False
                    break
        if ok:
            if count == 0:
                for i in range(d):
                    first[i] = w[i]
            count += 1
        # odometer
        k = 0
        while k < d:
            w[k] += 1
            if w[k] <= hi:
                break
            w[k] = lo
            k += 1
    return count, first


def _search_np(prev, depth, lo, hi, center, max_l):
    d = prev.shape[0]
    width = hi - lo + 1
    # row r enumerates the same odometer order as the numba kernel
    idx = np.arange(width ** d, dtype=np.int64)
    w = np.empty((idx.size, d), dtype=np.int64)
    for k in range(d):
        w[:, k] = (idx // width ** k) % width + lo
    ok = np.ones(idx.size, dtype=bool)
    for i in range(d):
        p = prev[i]
        if p >= 0:
            ok &= w[:, p] <= w[:, i] - 2
    for l in range(1, max_l + 1):
        up = w == center + l
        down = w == center - l
        ok &= up.sum(axis=1) == down.sum(axis=1)
        for i in range(d):
            bad_depth = up[:, i] & (depth[i] < l)
            ok &= ~bad_depth
            if depth[i] >= l:
                ok &= ~up[:, i] | (w[:, i - l] == center - l)
    hits = np.flatnonzero(ok)
    first = w[hits[0]].copy() if hits.size else np.zeros(d, dtype=np.int64)
    return int(hits.size), first


def weight_assignment_search(chain_lengths, lo, hi, center=0, backend=None):
    """Count weight assignments in ``[lo, hi]`` whose coordinate filtration is a
    monodromy weight filtration (centered at ``center``) of the nilpotent
    operator with the given Jordan chain lengths.

    Returns ``(count, first_assignment)``; the assignment lists one weight per
    basis vector, chains concatenated in order.
    """
    prev, depth = _chain_tables(chain_lengths)
    max_l = max(hi - center, center - lo, 0)
    if backend is None:
        backend = "numba" if _accel.USE_NUMBA else "numpy"
    if prev.size == 0:
        return 1, np.zeros(0, dtype=np.int64)
    if backend == "numba":
        count, first = _search_nb(prev, depth, lo, hi, center, max_l)
        return int(count), first
    if backend == "numpy":
        return _search_np(prev, depth, lo, hi, center, max_l)
    raise ValueError(f"unknown backend {backend!r}")


# ---------------------------------------------------------------------------
# nerve of a finite cover given by membership bitmasks


def pack_masks(members, npoints):
    """Pack an iterable of point-index sets into a (m, words) uint64 array."""
    words = max(1, (npoints + 63) // 64)
    members = list(members)
    out = np.zeros((len(members), words), dtype=np.uint64)
    for r, pts in enumerate(members):
        for x in pts:
            out[r, x // 64] |= np.uint64(1) << np.uint64(x % 64)
    return out


@njit(cache=True)
def _nerve_nb(masks, max_size):
    m, words = masks.shape
    cap = 16
    out = np.full((cap, max_size), -1, dtype=np.int64)
    n_out = 0
    stack_idx = np.zeros(max_size, dtype=np.int64)
    acc = np.zeros((max_size + 1, words), dtype=np.uint64)
    for w in range(words):
        acc[0, w] = ~np.uint64(0)
    depth = 0
    stack_idx[0] = 0
    while depth >= 0:
        i = stack_idx[depth]
        if i >= m:
            depth -= 1
            if depth >= 0:
                stack_idx[depth] += 1
            continue
        nonempty = False
        for w in range(words):
            acc[depth + 1, w] = acc[depth, w] & masks[i, w]
            if acc[depth + 1, w] != 0:
                nonempty = True
        if nonempty:
            if n_out == cap:
                bigger = np.full((cap * 2, max_size), -1, dtype=np.int64)
                bigger[:cap] = out
                out = bigger
                cap *= 2
            for k in range(depth + 1):
                out[n_out, k] = stack_idx[k]
            n_out += 1
            if depth + 1 < max_size:
                depth += 1
                stack_idx[depth] = i + 1
                continue
        stack_idx[depth] += 1
    return out[:n_out]


def _nerve_np(masks, max_size):
    m, words = masks.shape
    level = np.arange(m, dtype=np.int64)[:, None]
    acc = masks.copy()
    keep = (acc != 0).any(axis=1)
    level, acc = level[keep], acc[keep]
    found = [level]
    for _ in range(1, max_size):
        if level.shape[0] == 0:
            break
        last = level[:, -1]
        cand = np.arange(m, dtype=np.int64)
        pair_ok = cand[None, :] > last[:, None]
        rows, cols = np.nonzero(pair_ok)
        new_acc = acc[rows] & masks[cols]
        keep = (new_acc != 0).any(axis=1)
        level = np.concatenate([level[rows][keep], cols[keep][:, None]], axis=1)
        acc = new_acc[keep]
        found.append(level)
    out = np.full((sum(f.shape[0] for f in found), max_size), -1, dtype=np.int64)
    r = 0
    for f in found:
        out[r:r + f.shape[0], :f.shape[1]] = f
        r += f.shape[0]
    return out


def cover_nerve(masks, max_size=None, backend=None):
    """All strictly increasing index tuples of cover members with a common point.

    ``masks`` is the array produced by :func:`pack_masks`.  Returns a sorted list
    of tuples (lexicographic within each length, shorter tuples first).
    """
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    m = masks.shape[0]
    if max_size is None:
        max_size = m
    if m == 0 or max_size == 0:
        return []
    if backend is None:
        backend = "numba" if _accel.USE_NUMBA else "numpy"
    if backend == "numba":
        arr = _nerve_nb(masks, max_size)
    elif backend == "numpy":
        arr = _nerve_np(masks, max_size)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    tuples = [tuple(int(x) for x in row if x >= 0) for row in arr]
    return sorted(tuples, key=lambda t: (len(t), t))
