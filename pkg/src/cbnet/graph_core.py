"""Directed-graph representation and traversal primitives.

Everything downstream reads a :class:`Digraph`: an immutable, loopless,
simple directed graph whose vertices are labelled as customers or banks.
Iteration order is always sorted by vertex id so that every result is
deterministic.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import InvariantError, StructuralInputError

# Rows per scipy shortest-path call; bounds peak memory on large graphs.
_DISTANCE_CHUNK = 512


class VertexKind(str, Enum):
    CUSTOMER = "customer"
    BANK = "bank"


@dataclass(frozen=True)
class VertexRecord:
    id: str
    kind: VertexKind = VertexKind.BANK
    parent_id: str | None = None


class _Infinite:
    """Tagged "no path" length. Compares greater than every integer."""

    _instance: _Infinite | None = None

    def __new__(cls) -> _Infinite:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "infinite"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinite, ())

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return other is self

    def __gt__(self, other: object) -> bool:
        return other is not self

    def __ge__(self, other: object) -> bool:
        return True

    def __hash__(self) -> int:
        return hash("infinite")


INFINITE = _Infinite()


def is_infinite(value: object) -> bool:
    return value is INFINITE


class Digraph:
    """Immutable simple digraph with vertex metadata.

    ``out_adjacency`` and ``in_adjacency`` are exact transposes of each other;
    this is verified on construction.
    """

    def __init__(
        self,
        records: Mapping[str, VertexRecord],
        successors: Mapping[str, Iterable[str]],
    ) -> None:
        order = tuple(sorted(records))
        succ: dict[str, tuple[str, ...]] = {}
        pred_sets: dict[str, set[str]] = {v: set() for v in order}
        for v in order:
            targets = tuple(sorted(set(successors.get(v, ()))))
            for w in targets:
                if w == v:
                    raise StructuralInputError(f"self-loop: {v}")
                if w not in records:
                    raise StructuralInputError(f"edge {v}->{w} references unknown vertex")
                pred_sets[w].add(v)
            succ[v] = targets
        extra = set(successors) - set(records)
        if any(successors[v] for v in extra):
            raise StructuralInputError(f"edges from unknown vertices: {sorted(extra)[:5]}")
        self._records = dict(records)
        self._succ = succ
        self._pred = {v: tuple(sorted(pred_sets[v])) for v in order}
        self._order = order
        self._index = {v: i for i, v in enumerate(order)}
        self._check_transpose()

    def _check_transpose(self) -> None:
        n_out = sum(len(t) for t in self._succ.values())
        n_in = sum(len(t) for t in self._pred.values())
        if n_out != n_in:
            raise InvariantError("in/out adjacency are not transposes")

    # ---- basic queries ---------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._order

    @property
    def records(self) -> Mapping[str, VertexRecord]:
        return self._records

    @property
    def order(self) -> int:
        return len(self._order)

    @cached_property
    def size(self) -> int:
        return sum(len(t) for t in self._succ.values())

    def __len__(self) -> int:
        return len(self._order)

    def __contains__(self, v: object) -> bool:
        return v in self._records

    def __repr__(self) -> str:
        return f"Digraph(N={self.order}, m={self.size})"

    def successors(self, v: str) -> tuple[str, ...]:
        return self._succ[v]

    def predecessors(self, v: str) -> tuple[str, ...]:
        return self._pred[v]

    def out_degree(self, v: str) -> int:
        return len(self._succ[v])

    def in_degree(self, v: str) -> int:
        return len(self._pred[v])

    def has_edge(self, u: str, v: str) -> bool:
        return u in self._records and v in self._out_sets[u]

    def kind(self, v: str) -> VertexKind:
        return self._records[v].kind

    def index(self, v: str) -> int:
        return self._index[v]

    @cached_property
    def _out_sets(self) -> dict[str, frozenset[str]]:
        return {v: frozenset(t) for v, t in self._succ.items()}

    @property
    def out_adjacency(self) -> Mapping[str, frozenset[str]]:
        return self._out_sets

    @cached_property
    def in_adjacency(self) -> Mapping[str, frozenset[str]]:
        return {v: frozenset(t) for v, t in self._pred.items()}

    def edges(self) -> Iterator[tuple[str, str]]:
        for v in self._order:
            for w in self._succ[v]:
                yield v, w

    @cached_property
    def banks(self) -> frozenset[str]:
        return frozenset(v for v, r in self._records.items() if r.kind is VertexKind.BANK)

    @cached_property
    def customers(self) -> frozenset[str]:
        return frozenset(v for v, r in self._records.items() if r.kind is VertexKind.CUSTOMER)

    # ---- derived graphs --------------------------------------------------

    def induced(self, vertices: Iterable[str]) -> Digraph:
        keep = set(vertices)
        unknown = keep - self._records.keys()
        if unknown:
            raise StructuralInputError(f"unknown vertices: {sorted(unknown)[:5]}")
        records = {}
        for v in keep:
            rec = self._records[v]
            if rec.parent_id is not None and rec.parent_id not in keep:
                rec = VertexRecord(rec.id, rec.kind, None)
            records[v] = rec
        succ = {v: [w for w in self._succ[v] if w in keep] for v in keep}
        return Digraph(records, succ)

    def bank_subgraph(self) -> Digraph:
        return self.induced(self.banks)

    def without(self, vertices: Iterable[str]) -> Digraph:
        drop = set(vertices)
        return self.induced(v for v in self._order if v not in drop)

    @cached_property
    def adjacency_matrix(self) -> csr_matrix:
        n = self.order
        rows, cols = [], []
        for i, v in enumerate(self._order):
            for w in self._succ[v]:
                rows.append(i)
                cols.append(self._index[w])
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(n, n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self._records == other._records and self._succ == other._succ

    def __hash__(self) -> int:
        return hash((self._order, tuple(self._succ[v] for v in self._order)))


def build_digraph(
    edges: Iterable[tuple[str, str]],
    vertex_meta: Iterable[VertexRecord] | None = None,
) -> Digraph:
    """Build a digraph from an edge sequence, collapsing duplicates.

    Vertices that only appear in ``edges`` default to banks. Self-loops are
    rejected with the offending id in the message.
    """
    records: dict[str, VertexRecord] = {}
    for rec in vertex_meta or ():
        _check_id(rec.id)
        if rec.id in records and records[rec.id] != rec:
            raise StructuralInputError(f"conflicting metadata for vertex {rec.id}")
        records[rec.id] = VertexRecord(rec.id, VertexKind(rec.kind), rec.parent_id)
    succ: dict[str, set[str]] = {}
    for u, v in edges:
        _check_id(u)
        _check_id(v)
        if u == v:
            raise StructuralInputError(f"self-loop: {u}")
        succ.setdefault(u, set()).add(v)
        for x in (u, v):
            if x not in records:
                records[x] = VertexRecord(x)
    for rec in records.values():
        if rec.parent_id is None:
            continue
        if rec.kind is VertexKind.CUSTOMER:
            raise StructuralInputError(f"customer {rec.id} cannot have a parent")
        parent = records.get(rec.parent_id)
        if parent is None or parent.kind is not VertexKind.BANK:
            raise StructuralInputError(f"parent of {rec.id} must be a bank vertex: {rec.parent_id}")
    return Digraph(records, succ)


def _check_id(v: object) -> None:
    if not isinstance(v, str) or not v:
        raise StructuralInputError(f"vertex ids must be non-empty strings, got {v!r}")


# ---- degrees ---------------------------------------------------------------


@dataclass(frozen=True)
class VertexDegrees:
    in_total: int
    out_total: int
    in_from_customers: int
    in_from_banks: int
    out_to_customers: int
    out_to_banks: int


@dataclass(frozen=True)
class DegreeVector:
    by_vertex: Mapping[str, VertexDegrees]

    def __getitem__(self, v: str) -> VertexDegrees:
        return self.by_vertex[v]

    def __iter__(self) -> Iterator[str]:
        return iter(self.by_vertex)

    def __len__(self) -> int:
        return len(self.by_vertex)

    def total_in(self) -> int:
        return sum(d.in_total for d in self.by_vertex.values())

    def total_out(self) -> int:
        return sum(d.out_total for d in self.by_vertex.values())


def degrees(g: Digraph) -> DegreeVector:
    customers = g.customers
    out = {}
    for v in g.vertices:
        succ, pred = g.successors(v), g.predecessors(v)
        in_c = sum(1 for u in pred if u in customers)
        out_c = sum(1 for w in succ if w in customers)
        out[v] = VertexDegrees(
            in_total=len(pred),
            out_total=len(succ),
            in_from_customers=in_c,
            in_from_banks=len(pred) - in_c,
            out_to_customers=out_c,
            out_to_banks=len(succ) - out_c,
        )
    return DegreeVector(out)


# ---- traversal ---------------------------------------------------------------


def bfs_distances(g: Digraph, source: str) -> dict[str, int]:
    """Hop distance from ``source`` to every vertex it reaches (itself at 0)."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.successors(u):
            if w not in dist:
                dist[w] = du
                queue.append(w)
    return dist


def reach_levels(g: Digraph, v: str) -> tuple[frozenset[str], int]:
    """Forward frontier expansion seeded with the out-neighbours of ``v``.

    Returns the reach set (which contains ``v`` itself exactly when ``v`` lies
    on a directed cycle) and the number of non-empty frontiers expanded.
    """
    reached: set[str] = set()
    frontier = set(g.successors(v))
    levels = 0
    while frontier:
        reached |= frontier
        frontier = {w for u in frontier for w in g.successors(u)} - reached
        levels += 1
    return frozenset(reached), levels


def distance_rows(g: Digraph, sources: Sequence[str]) -> np.ndarray:
    """Hop-distance matrix rows for ``sources``; -1 marks unreachable targets.

    Columns follow ``g.vertices``.
    """
    n = g.order
    out = np.full((len(sources), n), -1, dtype=np.int64)
    if not sources or n == 0:
        return out
    adj = g.adjacency_matrix
    idx = np.array([g.index(s) for s in sources], dtype=np.int64)
    for start in range(0, len(idx), _DISTANCE_CHUNK):
        chunk = idx[start : start + _DISTANCE_CHUNK]
        d = shortest_path(adj, method="D", directed=True, unweighted=True, indices=chunk)
        finite = np.isfinite(d)
        block = out[start : start + len(chunk)]
        block[finite] = d[finite].astype(np.int64)
    return out


@dataclass(frozen=True)
class AccessibilityProfile:
    """Per-vertex accessibility and eccentricity.

    ``acc`` excludes the vertex itself; ``on_cycle`` lists the vertices whose
    raw reach set contains themselves.
    """

    acc: Mapping[str, int]
    ecc: Mapping[str, int]
    on_cycle: frozenset[str] = field(default_factory=frozenset)

    @property
    def order(self) -> int:
        return len(self.acc)

    @cached_property
    def histogram(self) -> dict[int, int]:
        hist: dict[int, int] = {}
        for a in self.acc.values():
            hist[a] = hist.get(a, 0) + 1
        return dict(sorted(hist.items()))

    @cached_property
    def mean(self) -> Fraction:
        if not self.acc:
            return Fraction(0)
        return Fraction(sum(self.acc.values()), len(self.acc))

    def msd(self, k: int, vertices: Iterable[str] | None = None) -> Fraction:
        """Mean squared deviation of accessibility from ``k``."""
        values = [self.acc[v] for v in vertices] if vertices is not None else list(self.acc.values())
        if not values:
            return Fraction(0)
        return Fraction(sum((a - k) ** 2 for a in values), len(values))

    def mean_over(self, vertices: Iterable[str]) -> Fraction:
        values = [self.acc[v] for v in vertices]
        return Fraction(sum(values), len(values)) if values else Fraction(0)

    @property
    def max_eccentricity(self) -> int:
        return max(self.ecc.values(), default=0)


def accessibility_profile(g: Digraph) -> AccessibilityProfile:
    sources = [v for v in g.vertices if g.out_degree(v) > 0]
    acc = {v: 0 for v in g.vertices}
    ecc = {v: 0 for v in g.vertices}
    rows = distance_rows(g, sources)
    for v, row in zip(sources, rows):
        reached = row[row > 0]
        acc[v] = int(reached.size)
        ecc[v] = int(reached.max()) if reached.size else 0
    on_cycle = frozenset(v for comp in tarjan_scc(g) if len(comp) > 1 for v in comp)
    return AccessibilityProfile(acc, ecc, on_cycle)


def tarjan_scc(g: Digraph) -> list[frozenset[str]]:
    """Strongly connected components, largest first (ties by smallest id).

    Iterative Tarjan, linear in N + m.
    """
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[frozenset[str]] = []
    counter = 0
    for root in g.vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(g.successors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.successors(w))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    members.append(w)
                    if w == v:
                        break
                comps.append(frozenset(members))
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def is_strongly_connected(g: Digraph) -> bool:
    if g.order == 0:
        return False
    start = g.vertices[0]
    return len(bfs_distances(g, start)) == g.order and len(_reverse_reach(g, start)) == g.order


def _reverse_reach(g: Digraph, source: str) -> set[str]:
    seen = {source}
    stack = [source]
    while stack:
        u = stack.pop()
        for w in g.predecessors(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def component_map(partition: Iterable[frozenset[str]]) -> dict[str, int]:
    return {v: i for i, comp in enumerate(partition) for v in comp}


def condense(g: Digraph, partition: Sequence[frozenset[str]]) -> Digraph:
    """Contract each SCC to its smallest member id.

    ``partition`` must equal the SCC partition of ``g``.
    """
    given = {frozenset(c) for c in partition}
    if sum(len(c) for c in partition) != g.order or given != set(tarjan_scc(g)):
        raise InvariantError("partition is not the SCC partition of the graph")
    rep = {v: min(comp) for comp in given for v in comp}
    succ: dict[str, set[str]] = {r: set() for r in rep.values()}
    for u, v in g.edges():
        ru, rv = rep[u], rep[v]
        if ru != rv:
            succ[ru].add(rv)
    h = Digraph({r: VertexRecord(r, g.kind(r)) for r in succ}, succ)
    if topological_order(h) is None:
        raise InvariantError("condensation is cyclic")
    return h


def topological_order(g: Digraph) -> list[str] | None:
    """Kahn's algorithm; ``None`` when the graph has a cycle."""
    indeg = {v: g.in_degree(v) for v in g.vertices}
    ready = deque(v for v in g.vertices if indeg[v] == 0)
    out = []
    while ready:
        v = ready.popleft()
        out.append(v)
        for w in g.successors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return out if len(out) == g.order else None


def diameter(g: Digraph, within: Iterable[str] | None = None):
    """Largest shortest-path length over ordered pairs, or ``INFINITE``."""
    h = g.induced(within) if within is not None else g
    if h.order <= 1:
        return 0
    rows = distance_rows(h, h.vertices)
    if (rows < 0).any():
        return INFINITE
    return int(rows.max())


def assortativity(g: Digraph) -> float | None:
    """Pearson correlation of (source out-degree, target in-degree) over edges.

    Returns ``None`` when undefined (fewer than two edges or a constant margin).
    """
    xs, ys = [], []
    for u, v in g.edges():
        xs.append(g.out_degree(u))
        ys.append(g.in_degree(v))
    if len(xs) < 2:
        return None
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        return None
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))
