"""Order complexes, integer homology, stabilizer ranks and balls of nuclear stars."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded
from .graph import SimplicialGraph, bits
from .whitehead import (
    VertexType, WhiteheadPoset, carried_generators, enumerate_whitehead_poset,
    format_vtype, is_carried,
)
from .words import (
    Decision, NO, UNKNOWN, YES, PartialConjugation, SymmetricAutomorphism,
    _images, abelianization, cyclic_reduce, exponent_data,
    inner_automorphism, is_inner, letter, pc_power,
)


# -- posets -----------------------------------------------------------------

class FinitePoset:
    """Labels plus a reflexive order matrix ``order[i, j] = (i ≤ j)``."""

    def __init__(self, labels: Sequence, order: np.ndarray):
        order = np.asarray(order, dtype=np.bool_)
        if order.shape != (len(labels), len(labels)):
            raise ValueError("order matrix shape does not match labels")
        self.labels = list(labels)
        self.order = order

    def __len__(self):
        return len(self.labels)

    @classmethod
    def from_whitehead(cls, p: WhiteheadPoset) -> "FinitePoset":
        return cls(list(range(len(p))), p.order)

    @property
    def strict(self) -> np.ndarray:
        s = self.order.copy()
        np.fill_diagonal(s, False)
        return s

    def minimum(self) -> int | None:
        hits = np.nonzero(self.order.all(axis=1))[0]
        return int(hits[0]) if len(hits) else None


def whitehead_zero(p) -> FinitePoset:
    """The poset with its nuclear minimum removed."""
    fp = p if isinstance(p, FinitePoset) else FinitePoset.from_whitehead(p)
    m = fp.minimum()
    if m is None:
        return fp
    keep = [i for i in range(len(fp)) if i != m]
    return FinitePoset([fp.labels[i] for i in keep], fp.order[np.ix_(keep, keep)])


# -- order complexes --------------------------------------------------------

@dataclass
class OrderComplex:
    """Chains of a finite poset, grouped by dimension; vertices are poset indices."""

    size: int
    simplices: list[list[tuple[int, ...]]]

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    @property
    def f_vector(self) -> list[int]:
        return [len(s) for s in self.simplices]

    def boundary(self, k: int) -> dict[int, dict[int, int]]:
        """∂_k as a sparse map column-simplex → {row-simplex: coefficient}.

        For k = 0 this is the augmentation onto the single (-1)-simplex.
        """
        if k == 0:
            return {j: {0: 1} for j in range(len(self.simplices[0]))} if self.simplices else {}
        index = {s: i for i, s in enumerate(self.simplices[k - 1])}
        out = {}
        for j, s in enumerate(self.simplices[k]):
            col = {}
            for t in range(len(s)):
                col[index[s[:t] + s[t + 1:]]] = -1 if t % 2 else 1
            out[j] = col
        return out


def _successors(strict: np.ndarray) -> list[list[int]]:
    return [np.nonzero(strict[i])[0].tolist() for i in range(strict.shape[0])]


def order_complex(p, max_simplices: int = 5 * 10 ** 6) -> OrderComplex:
    """All strictly increasing chains of ``p`` (WhiteheadPoset or FinitePoset)."""
    fp = p if isinstance(p, FinitePoset) else FinitePoset.from_whitehead(p)
    succ = _successors(fp.strict)
    by_dim: list[list[tuple[int, ...]]] = []
    count = 0
    stack = [(i,) for i in range(len(fp) - 1, -1, -1)]
    while stack:
        chain = stack.pop()
        d = len(chain) - 1
        while len(by_dim) <= d:
            by_dim.append([])
        by_dim[d].append(chain)
        count += 1
        if count > max_simplices:
            raise BudgetExceeded(f"order complex exceeds {max_simplices} simplices",
                                 {"simplices_found": count})
        for j in reversed(succ[chain[-1]]):
            stack.append(chain + (j,))
    for level in by_dim:
        level.sort()
    return OrderComplex(len(fp), by_dim)


# -- Smith normal form ------------------------------------------------------

def _dense_invariants(rows: list[list[int]]) -> list[int]:
    """Non-zero invariant factors of a dense integer matrix."""
    A = [r[:] for r in rows if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    out = []
    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (piv is None or abs(A[i][j]) < abs(A[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        dirty = True
            if not dirty:
                # pivot must divide every remaining entry
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
                continue
            # move the smallest entry of row/column t to the pivot slot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        out.append(abs(A[t][t]))
        t += 1
    return out


def smith_invariants(cols: dict[int, dict[int, int]], nrows: int) -> list[int]:
    """Non-zero invariant factors of a sparse integer matrix given by columns.

    Unit pivots are eliminated sparsely first; whatever remains is handed
    to a dense Smith normal form.
    """
    rows: dict[int, dict[int, int]] = {}
    for j, col in cols.items():
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
    colidx: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            colidx.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress:
        progress = False
        for i in sorted(rows, key=lambda r: len(rows[r])):
            r = rows.get(i)
            if r is None:
                continue
            js = [j for j, v in r.items() if v in (1, -1)]
            if not js:
                continue
            j = min(js, key=lambda c: len(colidx[c]))
            pv = r[j]
            for i2 in list(colidx[j]):
                if i2 == i:
                    continue
                r2 = rows[i2]
                q = r2[j] * pv  # pv = ±1, so division is multiplication
                for c, v in r.items():
                    nv = r2.get(c, 0) - q * v
                    if nv:
                        if c not in r2:
                            colidx.setdefault(c, set()).add(i2)
                        r2[c] = nv
                    elif c in r2:
                        del r2[c]
                        colidx[c].discard(i2)
                if not r2:
                    del rows[i2]
            for c in r:
                colidx[c].discard(i)
            del rows[i]
            units += 1
            progress = True
    if not rows:
        return [1] * units
    rlist = sorted(rows)
    clist = sorted({c for r in rows.values() for c in r})
    cpos = {c: k for k, c in enumerate(clist)}
    dense = [[0] * len(clist) for _ in rlist]
    for a, i in enumerate(rlist):
        for c, v in rows[i].items():
            dense[a][cpos[c]] = v
    return [1] * units + _dense_invariants(dense)


# -- homology ---------------------------------------------------------------

@dataclass
class HomologyGroup:
    dim: int
    betti: int
    torsion: list[int] = field(default_factory=list)

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion


@dataclass
class HomologyResult:
    groups: list[HomologyGroup]
    reduced: bool
    f_vector: list[int]

    def betti(self) -> list[int]:
        return [h.betti for h in self.groups]

    def vanishes(self) -> bool:
        return all(h.is_zero() for h in self.groups)

    def euler_from_cells(self) -> int:
        chi = sum((-1) ** k * c for k, c in enumerate(self.f_vector))
        return chi - 1 if self.reduced else chi

    def euler_from_betti(self) -> int:
        return sum((-1 if h.dim % 2 else 1) * h.betti for h in self.groups)

    def to_json(self) -> dict:
        return {"dims": self.f_vector, "reduced": self.reduced,
                "homology": [{"dim": h.dim, "betti": h.betti, "torsion": h.torsion}
                             for h in self.groups]}


def homology(c: OrderComplex, reduced: bool = True) -> HomologyResult:
    """Integer homology from Smith normal forms of the boundary maps."""
    counts = c.f_vector
    top = len(counts)
    invs: list[list[int]] = []  # invs[k] for ∂_k, k = 0..top-1 (∂_0 = augmentation)
    for k in range(top):
        if k == 0 and not reduced:
            invs.append([])
            continue
        nrows = 1 if k == 0 else counts[k - 1]
        invs.append(smith_invariants(c.boundary(k), nrows))
    groups = []
    for k in range(top):
        rank_out = len(invs[k])
        rank_in = len(invs[k + 1]) if k + 1 < top else 0
        tors = sorted(x for x in invs[k + 1] if x > 1) if k + 1 < top else []
        groups.append(HomologyGroup(k, counts[k] - rank_out - rank_in, tors))
    if reduced and not top:
        groups.append(HomologyGroup(-1, 1))
    return HomologyResult(groups, reduced, counts)


def boundary_squared_zero(c: OrderComplex) -> bool:
    """∂_{k}∘∂_{k+1} = 0 for every k, augmentation included."""
    for k in range(len(c.simplices) - 1):
        lower = c.boundary(k)
        for col in c.boundary(k + 1).values():
            acc: dict[int, int] = {}
            for i, v in col.items():
                for r, w in lower[i].items():
                    acc[r] = acc.get(r, 0) + v * w
            if any(acc.values()):
                return False
    return True


# -- stabilizer rank and cd -------------------------------------------------

def _conjugator_vector(g: SimplicialGraph, img, v: int) -> list[int]:
    """Abelianized conjugator of ``img`` = h v h⁻¹, coordinates in st(v) zeroed."""
    core, h = cyclic_reduce(g, img)
    if core != (letter(v),):
        raise ValueError("image is not a conjugate of its generator")
    ab = list(abelianization(g, h))
    for u in bits(g.star_mask(v)):
        ab[u] = 0
    return ab


def automorphism_vector(g: SimplicialGraph, alpha: SymmetricAutomorphism) -> list[int]:
    """Concatenated conjugator vectors of α(v) over all v, read from the images."""
    imgs = _images(g, alpha.factors)
    out: list[int] = []
    for v in range(g.n):
        out.extend(_conjugator_vector(g, imgs[v], v))
    return out


def integer_rank(rows: list[list[int]]) -> int:
    cols: dict[int, dict[int, int]] = {}
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            if x:
                cols.setdefault(j, {})[i] = x
    return len(smith_invariants(cols, len(rows)))


def stabilizer_rank(g: SimplicialGraph, V: VertexType) -> int:
    """Rank of the carried petal generators modulo inner automorphisms.

    Rows are image-derived exponent vectors; the inner automorphisms are
    spanned by conjugation by each vertex.
    """
    gens = [automorphism_vector(g, SymmetricAutomorphism.of(f)) for f in carried_generators(V)]
    inner = [automorphism_vector(g, inner_automorphism(g, (letter(a),))) for a in range(g.n)]
    return integer_rank(gens + inner) - integer_rank(inner)


@dataclass
class CdResult:
    cd: int
    witness: VertexType
    witness_index: int
    elements: int


def cohomological_dimension(g: SimplicialGraph, max_elements: int = 10 ** 6,
                            poset: WhiteheadPoset | None = None) -> CdResult:
    """Max rank over the Whitehead poset, with a vertex type realizing it."""
    p = poset if poset is not None else enumerate_whitehead_poset(g, max_elements)
    best = max(range(len(p)), key=lambda i: (p.ranks[i], -i))
    return CdResult(p.ranks[best], p.elements[best], best, len(p))


def chain_stabilizers_nest(g: SimplicialGraph, p: WhiteheadPoset, chain: Sequence[int]) -> bool:
    """Every carried generator of the chain's minimum is carried by each member."""
    lo = p.elements[chain[0]]
    gens = [SymmetricAutomorphism.of(f) for f in carried_generators(lo)]
    for i in chain[1:]:
        V = p.elements[i]
        for f, alpha in zip(carried_generators(lo), gens):
            if not is_carried(g, alpha, V[f.vertex]):
                return False
    return True


# -- balls of nuclear stars -------------------------------------------------

def petal_generators(g: SimplicialGraph) -> list[PartialConjugation]:
    """C^{a^±}_C for every vertex a and every component C of Γ − st(a)."""
    return [PartialConjugation(letter(a, s), C)
            for a in range(g.n) for s in (1, -1) for C in g.component_masks(a)]


def carried_representative(g: SimplicialGraph, V: VertexType, delta: SymmetricAutomorphism):
    """A product of carried generators agreeing with δ modulo inner, or None.

    The exponent data of δ is additive, so such a product exists only if
    every row is constant on petals; the candidate is then unique modulo inner.
    """
    e = exponent_data(g, delta)
    factors: list[PartialConjugation] = []
    for A in V.partitions:
        a = A.operative
        for P in A.petals:
            vals = {e[a][v] for v in bits(P)}
            if len(vals) != 1:
                return None
            factors.extend(pc_power(PartialConjugation(letter(a), P), vals.pop()).factors)
    return SymmetricAutomorphism(tuple(factors))


@dataclass
class MMBall:
    graph: SimplicialGraph
    radius: int
    inner_bound: int
    nuclei: list[SymmetricAutomorphism]
    poset: WhiteheadPoset
    classes: list[int]               # class id of star vertex (nucleus, element)
    identifications: list[dict]      # witness-certified gluings
    complete: bool

    def class_of(self, nucleus: int, element: int) -> int:
        return self.classes[nucleus * len(self.poset) + element]

    @property
    def class_count(self) -> int:
        return len(set(self.classes))

    def shared(self, i: int, j: int) -> list[int]:
        """Poset elements whose copies in stars i and j are identified."""
        return [e for e in range(len(self.poset)) if self.class_of(i, e) == self.class_of(j, e)]

    def ball_poset(self) -> FinitePoset:
        ids = sorted(set(self.classes))
        pos = {c: k for k, c in enumerate(ids)}
        order = np.eye(len(ids), dtype=np.bool_)
        m = len(self.poset)
        for s in range(len(self.nuclei)):
            for i, j in zip(*np.nonzero(self.poset.order)):
                order[pos[self.classes[s * m + i]], pos[self.classes[s * m + j]]] = True
        return FinitePoset(ids, order)

    def to_json(self) -> dict:
        g = self.graph
        return {"radius": self.radius, "inner_bound": self.inner_bound,
                "complete": self.complete,
                "nuclei": [alpha.describe(g) for alpha in self.nuclei],
                "star_size": len(self.poset), "classes": self.class_count,
                "identifications": self.identifications}

    def to_dot(self) -> str:
        g = self.graph
        lines = ["graph mm_ball {"]
        for i, alpha in enumerate(self.nuclei):
            lines.append(f'  n{i} [label="{alpha.describe(g)}"];')
        seen = set()
        for ident in self.identifications:
            key = (ident["from"], ident["to"])
            if key in seen:
                continue
            seen.add(key)
            shared = self.shared(*key)
            lines.append(f'  n{key[0]} -- n{key[1]} [label="{len(shared)} shared; '
                         f'witness {ident["witness"]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _decide_equal_mod_inner(g, beta1, beta2, bound) -> Decision:
    return is_inner(g, beta1.inverse() * beta2, bound)


def mm_ball(g: SimplicialGraph, radius: int = 1, inner_bound: int = 6,
            max_elements: int = 10 ** 6, poset: WhiteheadPoset | None = None) -> MMBall:
    """Stars of the nuclear vertices reachable by ≤ radius petal generators, glued.

    Nuclei are deduplicated modulo inner automorphisms.  Two star copies of
    the same vertex type are identified only when an explicit carried
    automorphism taking one marking to the other is found; any undecided
    inner test clears the completeness flag.
    """
    p = poset if poset is not None else enumerate_whitehead_poset(g, max_elements)
    gens = petal_generators(g)
    complete = True
    nuclei = [SymmetricAutomorphism()]
    frontier = [SymmetricAutomorphism()]
    for _ in range(radius):
        nxt = []
        for beta in frontier:
            for f in gens:
                cand = beta * SymmetricAutomorphism.of(f)
                new = True
                for old in nuclei:
                    d = _decide_equal_mod_inner(g, old, cand, inner_bound)
                    if d.verdict is YES:
                        new = False
                        break
                    if d.verdict is UNKNOWN:
                        complete = False
                if new:
                    nuclei.append(cand)
                    nxt.append(cand)
        frontier = nxt
    m = len(p)
    parent = list(range(len(nuclei) * m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    idents = []
    for i in range(len(nuclei)):
        for j in range(i + 1, len(nuclei)):
            delta = nuclei[i].inverse() * nuclei[j]
            for e, V in enumerate(p.elements):
                c = carried_representative(g, V, delta)
                if c is None:
                    continue
                d = is_inner(g, c.inverse() * delta, inner_bound)
                if d.verdict is UNKNOWN:
                    complete = False
                    continue
                if d.verdict is NO:
                    continue
                # α = β_i c β_i⁻¹ is carried by (X_i, V) and sends X_i to X_j
                alpha = nuclei[i] * c * nuclei[i].inverse()
                ra, rb = find(i * m + e), find(j * m + e)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
                idents.append({"from": i, "to": j, "element": e,
                               "vertex_type": format_vtype(g, V),
                               "witness": alpha.describe(g)})
    classes = [find(x) for x in range(len(parent))]
    return MMBall(g, radius, inner_bound, nuclei, p, classes, idents, complete)


# -- export -----------------------------------------------------------------

def poset_to_json(g: SimplicialGraph, p: WhiteheadPoset) -> dict:
    def petals(A):
        return [[g.labels[v] for v in bits(P)] for P in A.petals]
    return {"elements": [{"rank": p.ranks[i],
                          "partitions": {g.labels[a]: petals(V[a]) for a in range(g.n)}}
                         for i, V in enumerate(p.elements)],
            "covers": [list(c) for c in p.covers]}


def poset_to_dot(g: SimplicialGraph, p: WhiteheadPoset) -> str:
    lines = ["graph whitehead {", "  rankdir=BT;"]
    for i, V in enumerate(p.elements):
        label = format_vtype(g, V) or "nuclear"
        lines.append(f'  v{i} [label="{label} (rank {p.ranks[i]})"];')
    for i, j in p.covers:
        lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
