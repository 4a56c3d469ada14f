"""Finite simplicial graphs with bitset-backed link/star/component queries."""
from __future__ import annotations

import enum
import json
import re
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InputError, PreconditionError


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class ComponentClass(enum.Enum):
    SHARED = "shared"
    DOMINANT = "dominant"
    SUBORDINATE = "subordinate"


class SimplicialGraph:
    """An immutable graph on vertices ``0..n-1`` with optional labels.

    Adjacency is kept as one bitmask per vertex.  All set-valued queries
    come in two flavours: ``*_mask`` returning an int bitset and a plain
    version returning a ``frozenset``.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (),
                 labels: Sequence[str] | None = None):
        if n < 0:
            raise InputError("vertex count must be non-negative")
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise InputError("label count does not match vertex count")
        if len(set(labels)) != n:
            raise InputError("vertex labels must be unique")
        adj = [0] * n
        edge_set = set()
        for u, v in edges:
            self._check_id(u, n)
            self._check_id(v, n)
            if u == v:
                raise InputError(f"loop at vertex {labels[u]}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
            edge_set.add((min(u, v), max(u, v)))
        self.n = n
        self.labels = labels
        self._adj = tuple(adj)
        self._index = {lab: i for i, lab in enumerate(labels)}
        self._edges = tuple(sorted(edge_set))

    @staticmethod
    def _check_id(v, n):
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
            raise InputError(f"unknown vertex id {v!r}")

    # -- construction helpers -------------------------------------------
    @classmethod
    def from_labels(cls, labels: Sequence[str], edges: Iterable[tuple[str, str]]):
        labels = [str(x) for x in labels]
        index = {lab: i for i, lab in enumerate(labels)}
        try:
            ids = [(index[str(u)], index[str(v)]) for u, v in edges]
        except KeyError as exc:
            raise InputError(f"edge mentions unknown vertex {exc.args[0]!r}") from None
        return cls(len(labels), ids, labels)

    @classmethod
    def edgeless(cls, n: int, labels=None):
        return cls(n, (), labels)

    @classmethod
    def complete(cls, n: int, labels=None):
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)], labels)

    @classmethod
    def path(cls, n: int, labels=None):
        return cls(n, [(i, i + 1) for i in range(n - 1)], labels)

    # -- identity --------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, SimplicialGraph) and self.labels == other.labels
                and self._adj == other._adj)

    def __hash__(self):
        return hash((self.labels, self._adj))

    def __repr__(self):
        return f"SimplicialGraph(n={self.n}, edges={len(self._edges)})"

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def vertex(self, key) -> int:
        """Resolve a label (or an in-range int id) to a vertex id."""
        if isinstance(key, str):
            if key in self._index:
                return self._index[key]
            raise InputError(f"unknown vertex {key!r}")
        self._check_id(key, self.n)
        return key

    def label(self, v: int) -> str:
        return self.labels[v]

    # -- local structure -------------------------------------------------
    def adjacent(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def link_mask(self, v: int) -> int:
        self._check_id(v, self.n)
        return self._adj[v]

    def star_mask(self, v: int) -> int:
        self._check_id(v, self.n)
        return self._adj[v] | (1 << v)

    def link(self, v: int) -> frozenset[int]:
        return frozenset(bits(self.link_mask(v)))

    def star(self, v: int) -> frozenset[int]:
        return frozenset(bits(self.star_mask(v)))

    def in_star(self, u: int, v: int) -> bool:
        """True iff ``u`` lies in st(v), i.e. u == v or u ~ v."""
        return u == v or self.adjacent(u, v)

    def components_of_mask(self, mask: int) -> tuple[int, ...]:
        """Connected components of the induced subgraph on ``mask``."""
        comps = []
        rest = mask
        while rest:
            seed = rest & -rest
            comp = seed
            frontier = seed
            while frontier:
                grow = 0
                for v in bits(frontier):
                    grow |= self._adj[v]
                grow &= mask & ~comp
                comp |= grow
                frontier = grow
            comps.append(comp)
            rest &= ~comp
        comps.sort(key=lowest)
        return tuple(comps)

    @cached_property
    def _component_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.components_of_mask(self.all_mask & ~self.star_mask(a))
                     for a in range(self.n))

    def component_masks(self, a: int) -> tuple[int, ...]:
        """Components of Γ − st(a) as bitmasks, sorted by least vertex."""
        self._check_id(a, self.n)
        return self._component_table[a]

    def star_complement_components(self, a: int) -> list[frozenset[int]]:
        return [frozenset(bits(c)) for c in self.component_masks(a)]

    def is_union_of_components(self, a: int, mask: int) -> bool:
        for c in self.component_masks(a):
            inter = c & mask
            if inter and inter != c:
                return False
        return not (mask & self.star_mask(a))

    def dominant_component_mask(self, a: int, b: int) -> int:
        """The component of Γ − st(a) containing b."""
        for c in self.component_masks(a):
            if c >> b & 1:
                return c
        raise PreconditionError(f"vertex {b} lies in st({a})")

    def classify_component(self, a: int, b: int, C) -> ComponentClass:
        """Shared / dominant / subordinate class of a component of Γ − st(a) w.r.t. b."""
        self._check_id(a, self.n)
        self._check_id(b, self.n)
        if self.in_star(a, b):
            raise PreconditionError("classify_component needs distinct non-adjacent vertices")
        mask = C if isinstance(C, int) else to_mask(C)
        if mask not in self.component_masks(a):
            raise InputError("C is not a component of the star complement")
        found = []
        if mask in self.component_masks(b):
            found.append(ComponentClass.SHARED)
        if mask >> b & 1:
            found.append(ComponentClass.DOMINANT)
        dom_b = self.dominant_component_mask(b, a)
        if mask & ~dom_b == 0:
            found.append(ComponentClass.SUBORDINATE)
        if len(found) != 1:
            # cannot happen for a simplicial graph; kept loud rather than silent
            raise AssertionError(f"component classification not unique: {found}")
        return found[0]

    def is_sil_pair(self, a: int, b: int) -> bool:
        """Non-adjacent a, b whose star complements share a component."""
        if self.in_star(a, b):
            return False
        return bool(set(self.component_masks(a)) & set(self.component_masks(b)))

    def sil_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in range(a + 1, self.n)
                if self.is_sil_pair(a, b)]

    # -- numpy view for kernels -----------------------------------------
    @cached_property
    def commute_matrix(self):
        """Boolean n×n matrix: True where distinct vertices commute."""
        import numpy as np
        m = np.zeros((self.n, self.n), dtype=np.bool_)
        for u, v in self._edges:
            m[u, v] = m[v, u] = True
        return m


# -- parsing --------------------------------------------------------------

def graph_from_json(text: str) -> SimplicialGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed graph JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or "vertices" not in data:
        raise InputError("graph JSON must be an object with a 'vertices' list")
    verts = data["vertices"]
    edges = data.get("edges", [])
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise InputError("'vertices' and 'edges' must be lists")
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"edge {e!r} must be a two-element list")
    return SimplicialGraph.from_labels([str(v) for v in verts], [(str(u), str(v)) for u, v in edges])


_DOT_HEADER = re.compile(r"^\s*(strict\s+)?graph\b[^{]*\{", re.S)
_DOT_ID = r'(?:"[^"]*"|[A-Za-z0-9_.]+)'


def graph_from_dot(text: str) -> SimplicialGraph:
    """Parse the undirected, attribute-free subset of DOT."""
    m = _DOT_HEADER.match(text)
    if not m:
        raise InputError("DOT input must start with 'graph {' (undirected)")
    body_start = m.end()
    close = text.rfind("}")
    if close < body_start:
        raise InputError("DOT input is missing its closing brace")
    labels: list[str] = []
    seen = set()
    edges = []

    def add(name):
        name = name.strip('"')
        if name not in seen:
            seen.add(name)
            labels.append(name)
        return name

    body = text[body_start:close]
    line_offset = text[:body_start].count("\n") + 1
    for lineno, line in enumerate(body.split("\n"), start=line_offset):
        line = re.sub(r"//.*", "", line)
        for stmt in line.split(";"):
            stmt = stmt.strip()
            if not stmt:
                continue
            if "->" in stmt or "[" in stmt or "=" in stmt:
                raise InputError(f"unsupported DOT statement at line {lineno}: {stmt!r}")
            parts = [p.strip() for p in stmt.split("--")]
            for p in parts:
                if not re.fullmatch(_DOT_ID, p):
                    raise InputError(f"bad DOT identifier at line {lineno}: {p!r}")
            names = [add(p) for p in parts]
            edges.extend(zip(names, names[1:]))
    return SimplicialGraph.from_labels(labels, edges)


def parse_graph(text: str) -> SimplicialGraph:
    """Parse a graph in JSON or the DOT subset, sniffing the format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return graph_from_json(text)
    return graph_from_dot(text)


def graph_to_json(g: SimplicialGraph) -> dict:
    return {"vertices": list(g.labels),
            "edges": [[g.labels[u], g.labels[v]] for u, v in g.edges]}
