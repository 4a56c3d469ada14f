"""Hot inner loops, compiled with numba when it is available.

Letters are encoded as signed ints: vertex ``v`` is ``v + 1`` and its
inverse is ``-(v + 1)``.  Every kernel has a plain Python/numpy twin
(``*_py``) that is used when numba is missing or when the environment
variable ``RAAGMM_DISABLE_NUMBA`` is set to a non-empty value other
than ``0``.  The twins are also what the tests compare against.
"""
from __future__ import annotations

import os

import numpy as np

DISABLED = os.environ.get("RAAGMM_DISABLE_NUMBA", "") not in ("", "0")

try:
    if DISABLED:
        raise ImportError("numba disabled by RAAGMM_DISABLE_NUMBA")
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def letter_key(code: int) -> int:
    """Sort key for letters: (vertex id, sign) with +1 before -1."""
    return 2 * (abs(code) - 1) + (code < 0)


# ---------------------------------------------------------------------------
# free reduction with commutation (stacking) + lex-least canonical order
# ---------------------------------------------------------------------------

def reduce_py(word, adj) -> list:
    """Graphically reduce ``word``; ``adj`` is a tuple of adjacency bitmasks."""
    out: list[int] = []
    for x in word:
        vx = abs(x) - 1
        ax = adj[vx]
        j = len(out) - 1
        while j >= 0:
            y = out[j]
            if y == -x:
                del out[j]
                break
            vy = abs(y) - 1
            if vy == vx or not (ax >> vy) & 1:
                out.append(x)
                break
            j -= 1
        else:
            out.append(x)
    return out


def canonical_py(word, adj) -> list:
    """Lex-least word in the commutation class of a reduced ``word``."""
    m = len(word)
    if m < 2:
        return list(word)
    verts = [abs(x) - 1 for x in word]
    indeg = [0] * m
    succ: list[list[int]] = [[] for _ in range(m)]
    for j in range(m):
        vj = verts[j]
        aj = adj[vj]
        for i in range(j):
            vi = verts[i]
            if vi == vj or not (aj >> vi) & 1:
                succ[i].append(j)
                indeg[j] += 1
    ready = [i for i in range(m) if indeg[i] == 0]
    out = []
    while ready:
        best = min(ready, key=lambda i: letter_key(word[i]))
        ready.remove(best)
        out.append(word[best])
        for j in succ[best]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    return out


def cyclic_core_py(word, adj) -> tuple[list, list]:
    """Strip x ... x^-1 pairs (x in the first pile, x^-1 in the last).

    ``word`` must already be reduced.  Returns (core, stripped letters in
    order), so that word = h·core·h^-1 with h the product of the stripped
    letters.
    """
    w = list(word)
    stripped = []
    while True:
        m = len(w)
        verts = [abs(x) - 1 for x in w]
        hit = None
        for i in range(m):
            vi = verts[i]
            ai = adj[vi]
            if any(verts[k] == vi or not (ai >> verts[k]) & 1 for k in range(i)):
                continue
            target = -w[i]
            for j in range(m - 1, i, -1):
                if w[j] != target:
                    continue
                if all((adj[verts[j]] >> verts[k]) & 1 and verts[k] != verts[j]
                       for k in range(j + 1, m)):
                    hit = (i, j)
                break
            if hit:
                break
        if hit is None:
            return w, stripped
        i, j = hit
        stripped.append(w[i])
        del w[j]
        del w[i]


def height_py(flat, offsets, img_flat, img_offsets, adj) -> int:
    """Σ cyclic length of each word after substituting generator images."""
    total = 0
    for k in range(len(offsets) - 1):
        sub: list[int] = []
        for x in flat[offsets[k]:offsets[k + 1]]:
            v = abs(x) - 1
            img = img_flat[img_offsets[v]:img_offsets[v + 1]]
            if x > 0:
                sub.extend(img)
            else:
                sub.extend(-y for y in reversed(img))
        red = reduce_py(sub, adj)
        core, _ = cyclic_core_py(red, adj)
        total += len(core)
    return total


@njit(cache=True)
def _reduce_nb(word, comm):
    out = np.empty(word.shape[0], dtype=np.int64)
    m = 0
    for t in range(word.shape[0]):
        x = word[t]
        vx = abs(x) - 1
        j = m - 1
        cancelled = False
        while j >= 0:
            y = out[j]
            if y == -x:
                for k in range(j, m - 1):
                    out[k] = out[k + 1]
                m -= 1
                cancelled = True
                break
            vy = abs(y) - 1
            if vy == vx or not comm[vx, vy]:
                break
            j -= 1
        if not cancelled:
            out[m] = x
            m += 1
    return out[:m].copy()


@njit(cache=True)
def _canonical_nb(word, comm):
    m = word.shape[0]
    out = np.empty(m, dtype=np.int64)
    if m == 0:
        return out
    indeg = np.zeros(m, dtype=np.int64)
    dep = np.zeros((m, m), dtype=np.bool_)
    for j in range(m):
        vj = abs(word[j]) - 1
        for i in range(j):
            vi = abs(word[i]) - 1
            if vi == vj or not comm[vi, vj]:
                dep[i, j] = True
                indeg[j] += 1
    used = np.zeros(m, dtype=np.bool_)
    for t in range(m):
        best = -1
        bkey = 0
        for i in range(m):
            if used[i] or indeg[i] != 0:
                continue
            x = word[i]
            key = 2 * (abs(x) - 1) + (1 if x < 0 else 0)
            if best < 0 or key < bkey:
                best = i
                bkey = key
        used[best] = True
        out[t] = word[best]
        for j in range(m):
            if dep[best, j]:
                indeg[j] -= 1
    return out


@njit(cache=True)
def _cyclic_len_nb(w, comm):
    # w reduced; strip conjugating pairs in place, return remaining length
    m = w.shape[0]
    buf = w.copy()
    while True:
        hi = -1
        hj = -1
        for i in range(m):
            vi = abs(buf[i]) - 1
            head = True
            for k in range(i):
                vk = abs(buf[k]) - 1
                if vk == vi or not comm[vi, vk]:
                    head = False
                    break
            if not head:
                continue
            for j in range(m - 1, i, -1):
                if buf[j] != -buf[i]:
                    continue
                vj = vi
                tail = True
                for k in range(j + 1, m):
                    vk = abs(buf[k]) - 1
                    if vk == vj or not comm[vj, vk]:
                        tail = False
                        break
                if tail:
                    hi = i
                    hj = j
                break
            if hi >= 0:
                break
        if hi < 0:
            return m
        t = 0
        for k in range(m):
            if k != hi and k != hj:
                buf[t] = buf[k]
                t += 1
        m -= 2


@njit(cache=True)
def _height_nb(flat, offsets, img_flat, img_offsets, comm):
    total = 0
    for k in range(offsets.shape[0] - 1):
        size = 0
        for t in range(offsets[k], offsets[k + 1]):
            v = abs(flat[t]) - 1
            size += img_offsets[v + 1] - img_offsets[v]
        sub = np.empty(size, dtype=np.int64)
        p = 0
        for t in range(offsets[k], offsets[k + 1]):
            x = flat[t]
            v = abs(x) - 1
            lo = img_offsets[v]
            hi = img_offsets[v + 1]
            if x > 0:
                for s in range(lo, hi):
                    sub[p] = img_flat[s]
                    p += 1
            else:
                for s in range(hi - 1, lo - 1, -1):
                    sub[p] = -img_flat[s]
                    p += 1
        red = _reduce_nb(sub, comm)
        total += _cyclic_len_nb(red, comm)
    return total


# ---------------------------------------------------------------------------
# heights of α⁻¹(W) for a batch of automorphisms carried by one partition
# ---------------------------------------------------------------------------

def _carried_sub_py(w, petal_of, a_code, row):
    sub: list[int] = []
    for x in w:
        p = petal_of[abs(x) - 1]
        e = -row[p] if p >= 0 else 0
        if e == 0:
            sub.append(x)
            continue
        c = a_code if e > 0 else -a_code
        sub.extend([c] * abs(e))
        sub.append(x)
        sub.extend([-c] * abs(e))
    return sub


def carried_heights_py(flat, offsets, petal_of, a_code, exps, adj):
    """Row r: Σ_w |α_r⁻¹(w)| with α_r = Π_P (C^a_P)^{exps[r, P]}."""
    out = np.zeros(len(exps), dtype=np.int64)
    words = [list(flat[offsets[k]:offsets[k + 1]]) for k in range(len(offsets) - 1)]
    for r, row in enumerate(exps):
        total = 0
        for w in words:
            red = reduce_py(_carried_sub_py(w, petal_of, a_code, row), adj)
            total += len(cyclic_core_py(red, adj)[0])
        out[r] = total
    return out


@njit(cache=True)
def _carried_heights_nb(flat, offsets, petal_of, a_code, exps, comm):
    nrows = exps.shape[0]
    out = np.zeros(nrows, dtype=np.int64)
    for r in range(nrows):
        total = 0
        for k in range(offsets.shape[0] - 1):
            size = 0
            for t in range(offsets[k], offsets[k + 1]):
                p = petal_of[abs(flat[t]) - 1]
                size += 1
                if p >= 0:
                    size += 2 * abs(exps[r, p])
            sub = np.empty(size, dtype=np.int64)
            q = 0
            for t in range(offsets[k], offsets[k + 1]):
                x = flat[t]
                p = petal_of[abs(x) - 1]
                e = 0
                if p >= 0:
                    e = -exps[r, p]
                c = a_code if e > 0 else -a_code
                for _ in range(abs(e)):
                    sub[q] = c
                    q += 1
                sub[q] = x
                q += 1
                for _ in range(abs(e)):
                    sub[q] = -c
                    q += 1
            red = _reduce_nb(sub, comm)
            total += _cyclic_len_nb(red, comm)
        out[r] = total
    return out


# ---------------------------------------------------------------------------
# crossing counts between candidate partitions of two operative factors
# ---------------------------------------------------------------------------

def crossing_matrix_py(pa, pb, a_bit, b_bit):
    """Crossing counts for every pair of rows of ``pa`` × ``pb``.

    ``pa``/``pb`` are int64 arrays (candidates × max petals) of petal
    bitmasks padded with zeros.  Petals of ``pa`` containing b and petals
    of ``pb`` containing a are excluded, per the crossing definition.
    """
    pa = np.where((pa & b_bit) != 0, 0, pa)
    pb = np.where((pb & a_bit) != 0, 0, pb)
    inter = pa[:, None, :, None] & pb[None, :, None, :]
    return (inter != 0).sum(axis=(2, 3)).astype(np.int64)


@njit(cache=True)
def _crossing_matrix_nb(pa, pb, a_bit, b_bit):
    na, ka = pa.shape
    nb, kb = pb.shape
    out = np.zeros((na, nb), dtype=np.int64)
    for i in range(na):
        for j in range(nb):
            c = 0
            for s in range(ka):
                p = pa[i, s]
                if p == 0 or (p & b_bit) != 0:
                    continue
                for t in range(kb):
                    q = pb[j, t]
                    if q == 0 or (q & a_bit) != 0:
                        continue
                    if (p & q) != 0:
                        c += 1
            out[i, j] = c
    return out


# ---------------------------------------------------------------------------
# order relation and covers between vertex types
# ---------------------------------------------------------------------------

def leq_matrix_py(elements, tables):
    """``out[i, j]`` iff element i ≤ element j coordinate-wise.

    ``elements`` is (m × n) candidate indices; ``tables`` is (n × K × K)
    boolean, ``tables[v, p, q]`` meaning candidate p ≤ candidate q at v.
    """
    m, n = elements.shape
    out = np.ones((m, m), dtype=np.bool_)
    for v in range(n):
        col = elements[:, v]
        out &= tables[v][col[:, None], col[None, :]]
    return out


@njit(cache=True)
def _leq_matrix_nb(elements, tables):
    m, n = elements.shape
    out = np.ones((m, m), dtype=np.bool_)
    for i in range(m):
        for j in range(m):
            for v in range(n):
                if not tables[v, elements[i, v], elements[j, v]]:
                    out[i, j] = False
                    break
    return out


def cover_matrix_py(strict):
    """Covers of a strict order: i < j with nothing strictly between."""
    s = strict.astype(np.float32)
    between = (s @ s) > 0
    return strict & ~between


@njit(cache=True)
def _cover_matrix_nb(strict):
    m = strict.shape[0]
    words = (m + 63) // 64
    rows = np.zeros((m, words), dtype=np.uint64)
    cols = np.zeros((m, words), dtype=np.uint64)
    one = np.uint64(1)
    for i in range(m):
        for j in range(m):
            if strict[i, j]:
                rows[i, j >> 6] |= one << np.uint64(j & 63)
                cols[j, i >> 6] |= one << np.uint64(i & 63)
    out = np.zeros((m, m), dtype=np.bool_)
    for i in range(m):
        for j in range(m):
            if not strict[i, j]:
                continue
            hit = False
            for w in range(words):
                if rows[i, w] & cols[j, w]:
                    hit = True
                    break
            out[i, j] = not hit
    return out


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _as_arr(seq):
    return np.asarray(seq, dtype=np.int64)


if HAS_NUMBA:
    def reduce_word(word, graph):
        return _reduce_nb(_as_arr(word), graph.commute_matrix).tolist()

    def normal_form(word, graph):
        comm = graph.commute_matrix
        return _canonical_nb(_reduce_nb(_as_arr(word), comm), comm).tolist()

    def canonical(word, graph):
        return _canonical_nb(_as_arr(word), graph.commute_matrix).tolist()

    def height_total(flat, offsets, img_flat, img_offsets, graph):
        return int(_height_nb(_as_arr(flat), _as_arr(offsets), _as_arr(img_flat),
                              _as_arr(img_offsets), graph.commute_matrix))

    def crossing_matrix(pa, pb, a_bit, b_bit):
        return _crossing_matrix_nb(pa, pb, np.int64(a_bit), np.int64(b_bit))

    def carried_heights(flat, offsets, petal_of, a_code, exps, graph):
        return _carried_heights_nb(_as_arr(flat), _as_arr(offsets), _as_arr(petal_of),
                                   np.int64(a_code), np.asarray(exps, dtype=np.int64),
                                   graph.commute_matrix)

    leq_matrix = _leq_matrix_nb
    cover_matrix = _cover_matrix_nb
else:
    def reduce_word(word, graph):
        return reduce_py(word, graph._adj)

    def normal_form(word, graph):
        adj = graph._adj
        return canonical_py(reduce_py(word, adj), adj)

    def canonical(word, graph):
        return canonical_py(word, graph._adj)

    def height_total(flat, offsets, img_flat, img_offsets, graph):
        return height_py(flat, offsets, img_flat, img_offsets, graph._adj)

    def carried_heights(flat, offsets, petal_of, a_code, exps, graph):
        return carried_heights_py(flat, offsets, petal_of, a_code, exps, graph._adj)

    crossing_matrix = crossing_matrix_py
    leq_matrix = leq_matrix_py
    cover_matrix = cover_matrix_py
