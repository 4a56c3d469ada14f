"""Independent reference implementations used only by the tests.

Nothing here imports from raagmm; each routine is the slow, obvious
version of something the package does faster.
"""
from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np


# -- free groups: letters are ±(v+1) ------------------------------------------

def free_reduce(w):
    out = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return out


def free_cyclic_length(w):
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return max(0, j - i + 1)


def free_apply_pc(conj, support, w):
    """Image of w under x ↦ conj·x·conj⁻¹ for letters x with vertex in support."""
    out = []
    for x in w:
        if (abs(x) - 1) in support:
            out += [conj, x, -conj]
        else:
            out.append(x)
    return free_reduce(out)


def free_red_pc(conj, support, words, k=1):
    """red of (C^conj_support)^k at the standard basis: h(W) − h(α⁻¹W)."""
    before = sum(free_cyclic_length(w) for w in words)
    after = 0
    for w in words:
        for _ in range(k):
            w = free_apply_pc(-conj, support, w)
        after += free_cyclic_length(w)
    return before - after


# -- RAAG words by brute force over commutation classes ------------------------

def commutation_class(w, adjacent):
    """All words reachable from w by swapping adjacent commuting letters."""
    w = tuple(w)
    seen = {w}
    stack = [w]
    while stack:
        u = stack.pop()
        for i in range(len(u) - 1):
            a, b = abs(u[i]) - 1, abs(u[i + 1]) - 1
            if a != b and adjacent(a, b):
                v = u[:i] + (u[i + 1], u[i]) + u[i + 2:]
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return seen


def has_cancellation(w, adjacent):
    return any(u[i] == -u[i + 1] for u in commutation_class(w, adjacent) for i in range(len(u) - 1))


# -- counting ------------------------------------------------------------------

def bell(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def hypertrees(n):
    """Hypertrees on {0..n-1}: sets of hyperedges (size ≥ 2) that are
    connected with Σ(|e|−1) = n−1.  Returns a list of edge tuples."""
    edges = [frozenset(c) for k in range(2, n + 1) for c in combinations(range(n), k)]
    out = []

    def connected(es):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x
        for e in es:
            e = sorted(e)
            for v in e[1:]:
                parent[find(v)] = find(e[0])
        return len({find(v) for v in range(n)}) == 1

    def rec(start, chosen, weight):
        if weight == n - 1:
            if connected(chosen):
                out.append(tuple(chosen))
            return
        for i in range(start, len(edges)):
            w = len(edges[i]) - 1
            if weight + w <= n - 1:
                rec(i + 1, chosen + [edges[i]], weight + w)

    if n == 1:
        return [()]
    rec(0, [], 0)
    return out


# -- linear algebra ----------------------------------------------------------

def rational_rank(rows):
    """Rank over Q by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def det(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return int(d)


def determinantal_invariants(rows):
    """Invariant factors via d_k = gcd of k×k minors, d_1⋯d_k = D_k."""
    a = np.asarray(rows, dtype=object)
    if a.size == 0:
        return []
    nr, nc = a.shape
    D = [1]
    for k in range(1, min(nr, nc) + 1):
        g = 0
        for rs in combinations(range(nr), k):
            for cs in combinations(range(nc), k):
                g = gcd(g, abs(det([[a[i][j] for j in cs] for i in rs])))
        if g == 0:
            break
        D.append(g)
    return [D[k] // D[k - 1] for k in range(1, len(D))]


def chains(order):
    """Simplices of the order complex of a poset given by a reflexive bool matrix."""
    n = len(order)
    out = []

    def ext(ch):
        out.append(ch)
        for j in range(n):
            if j != ch[-1] and order[ch[-1]][j]:
                ext(ch + (j,))
    for i in range(n):
        ext((i,))
    return out


def reduced_betti_rational(order):
    """Reduced Betti numbers over Q from dense boundary matrices."""
    simp = chains(order)
    by_dim = {}
    for s in simp:
        by_dim.setdefault(len(s) - 1, []).append(s)
    top = max(by_dim) if by_dim else -1
    ranks = {}
    for k in range(0, top + 1):
        if k == 0:
            ranks[0] = 1 if by_dim.get(0) else 0
            continue
        idx = {s: i for i, s in enumerate(by_dim[k - 1])}
        mat = [[0] * len(by_dim[k]) for _ in by_dim[k - 1]]
        for j, s in enumerate(by_dim[k]):
            for t in range(len(s)):
                mat[idx[s[:t] + s[t + 1:]]][j] += (-1) ** t
        ranks[k] = rational_rank(mat)
    betti = []
    for k in range(0, top + 1):
        betti.append(len(by_dim[k]) - ranks[k] - ranks.get(k + 1, 0))
    return betti


# -- RAAG words via the cancellation criterion ----------------------------------
# A word is reduced iff it has no subword x u x⁻¹ with every letter of u
# commuting with x.  Cyclic reduction also cancels x … x⁻¹ pairs whose
# prefix and suffix commute with x.

def _commutes(x, y, adjacent):
    return adjacent(abs(x) - 1, abs(y) - 1)


def raag_reduce(w, adjacent):
    w = list(w)
    changed = True
    while changed:
        changed = False
        for i in range(len(w)):
            for j in range(i + 1, len(w)):
                if w[j] == -w[i]:
                    del w[j], w[i]
                    changed = True
                    break
                if not _commutes(w[i], w[j], adjacent):
                    break
            if changed:
                break
    return w


def raag_cyclic_length(w, adjacent):
    w = raag_reduce(w, adjacent)
    changed = True
    while changed:
        changed = False
        for i in range(len(w)):
            if not all(_commutes(w[i], y, adjacent) for y in w[:i]):
                continue
            for j in range(len(w) - 1, i, -1):
                if w[j] == -w[i] and all(_commutes(w[i], y, adjacent) for y in w[j + 1:]):
                    del w[j], w[i]
                    changed = True
                    break
            if changed:
                break
    return len(w)


def raag_apply(factors, w, adjacent):
    """Apply f_1 ∘ … ∘ f_k (f_k first); each factor is (conjugator, support set)."""
    for conj, support in reversed(factors):
        out = []
        for x in w:
            if (abs(x) - 1) in support:
                out += [conj, x, -conj]
            else:
                out.append(x)
        w = raag_reduce(out, adjacent)
    return w


def raag_red(factors, words, adjacent):
    """h(W) − h(α⁻¹W) at the standard basis."""
    inverse = [(-c, s) for c, s in reversed(factors)]
    before = sum(raag_cyclic_length(w, adjacent) for w in words)
    after = sum(raag_cyclic_length(raag_apply(inverse, w, adjacent), adjacent) for w in words)
    return before - after
