"""Degree-only diameter bounds for a strongly connected component.

Pipeline: contract 2-cycles to a fixed point, balance every vertex by adding
nominal vertices, raise the minimum degree where pairs of vertices share two
free nominal vertices, then evaluate Knyazev's and Dankelmann's bounds.
Also bounds and computes circumference.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvariantError, PreconditionError
from .graph_core import Digraph, VertexRecord, diameter, is_strongly_connected


def _require_scc(g: Digraph) -> None:
    if g.order == 0 or not is_strongly_connected(g):
        raise PreconditionError("input digraph must be strongly connected")


def _two_cycle_pairs(g: Digraph) -> list[tuple[str, str]]:
    return [(u, v) for u, v in g.edges() if u < v and g.has_edge(v, u)]


def contract_two_cycles(g: Digraph) -> tuple[Digraph, dict[str, frozenset[str]]]:
    """Merge 2-cycle endpoints until no 2-cycle remains.

    Each merged class is named after its smallest member. Returns the
    contracted digraph and a map from class name to original members.
    """
    _require_scc(g)
    members = {v: frozenset([v]) for v in g.vertices}
    h = g
    while True:
        pairs = _two_cycle_pairs(h)
        if not pairs:
            return h, dict(sorted(members.items()))
        parent = {v: v for v in h.vertices}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in pairs:
            ru, rv = find(u), find(v)
            if ru != rv:
                lo, hi = sorted((ru, rv))
                parent[hi] = lo
        rep = {v: find(v) for v in h.vertices}
        succ: dict[str, set[str]] = {r: set() for r in set(rep.values())}
        for u, v in h.edges():
            if rep[u] != rep[v]:
                succ[rep[u]].add(rep[v])
        merged: dict[str, set[str]] = {}
        for v, r in rep.items():
            merged.setdefault(r, set()).update(members[v])
        members = {r: frozenset(ms) for r, ms in merged.items()}
        h = Digraph({r: VertexRecord(r, g.kind(r)) for r in succ}, succ)


@dataclass(frozen=True)
class EulerianExtension:
    """A balanced supergraph of ``base`` built with nominal vertices ``omega``.

    ``degree`` maps every base vertex to its current in = out degree.
    """

    base: Digraph
    graph: Digraph
    omega: tuple[str, ...]
    added_edges: tuple[tuple[str, str], ...]
    degree: dict[str, int]
    checksum_lhs: int
    checksum_rhs: int
    boost_steps: int = 0
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def n_prime(self) -> int:
        return self.base.order + len(self.omega)

    @property
    def delta(self) -> int:
        """Minimum out-degree over the whole extension, nominal vertices included."""
        return min(self.graph.out_degree(v) for v in self.graph.vertices)

    @property
    def delta_base(self) -> int:
        return min(self.degree.values())

    @property
    def checksum_ok(self) -> bool:
        return self.checksum_lhs == self.checksum_rhs


def _nominal_ids(g: Digraph, count: int) -> tuple[str, ...]:
    prefix = "~omega"
    while any(v.startswith(prefix) for v in g.vertices):
        prefix = "~" + prefix
    width = len(str(max(count - 1, 0)))
    return tuple(f"{prefix}{i:0{width}d}" for i in range(count))


def _audit_balance(h: Digraph) -> None:
    bad = [v for v in h.vertices if h.in_degree(v) != h.out_degree(v)]
    if bad:
        raise InvariantError(f"extension not balanced at {bad[:5]}")


def eulerianize(g: Digraph) -> EulerianExtension:
    """Balance in- and out-degree of every vertex via nominal vertices.

    A vertex with surplus in-degree sends its surplus to distinct nominal
    vertices; a vertex with surplus out-degree receives from distinct nominal
    vertices. Slots are dealt round-robin so each nominal vertex ends with
    equal in- and out-degree. The number of nominal vertices is the largest
    absolute imbalance, the smallest count that keeps the result simple.
    """
    _require_scc(g)
    imbalance = {v: g.in_degree(v) - g.out_degree(v) for v in g.vertices}
    n_omega = max((abs(x) for x in imbalance.values()), default=0)
    omega = _nominal_ids(g, n_omega)
    added: list[tuple[str, str]] = []
    slot = 0
    for v in g.vertices:
        for _ in range(max(imbalance[v], 0)):
            added.append((v, omega[slot % n_omega]))
            slot += 1
    slot = 0
    for v in g.vertices:
        for _ in range(max(-imbalance[v], 0)):
            added.append((omega[slot % n_omega], v))
            slot += 1
    h = _extended(g, omega, added)
    _audit_balance(h)
    if not is_strongly_connected(h):
        raise InvariantError("Eulerian extension lost strong connectivity")
    degree = {v: max(g.in_degree(v), g.out_degree(v)) for v in g.vertices}
    lhs = sum(degree.values()) - g.size
    rhs = 2 * n_omega
    notes = ()
    if lhs != rhs:
        notes = (f"degree checksum: sum(d_i) - m = {lhs} but 2|Omega| = {rhs}",)
    return EulerianExtension(g, h, omega, tuple(added), degree, lhs, rhs, 0, notes)


def _extended(g: Digraph, omega: tuple[str, ...], added) -> Digraph:
    records = dict(g.records)
    records.update({w: VertexRecord(w) for w in omega})
    succ: dict[str, set[str]] = {v: set(g.successors(v)) for v in g.vertices}
    for w in omega:
        succ[w] = set()
    for u, v in added:
        if v in succ[u]:
            raise InvariantError(f"duplicate edge {u}->{v}")
        succ[u].add(v)
    return Digraph(records, succ)


def boost_min_outdegree(ext: EulerianExtension) -> EulerianExtension:
    """Raise the minimum base degree using pairs of free nominal vertices.

    Repeatedly take the base vertex ``j`` of least degree and a partner ``q``
    (degree at most n'/2) such that two nominal vertices ``v, w`` are
    non-adjacent to both; add ``q->v, w->q, j->w, v->j``. Stops when ``j`` has
    no partner. Every step keeps each vertex balanced.
    """
    omega = set(ext.omega)
    if not omega:
        return ext
    h = ext.graph
    adjacent = {
        v: set(h.successors(v)) | set(h.predecessors(v)) for v in ext.base.vertices
    }
    free = {v: omega - adjacent[v] for v in ext.base.vertices}
    degree = dict(ext.degree)
    added = list(ext.added_edges)
    half = Fraction(ext.n_prime, 2)
    steps = 0
    while True:
        j = min(degree, key=lambda v: (degree[v], v))
        partners = sorted(
            (degree[q], q)
            for q in degree
            if q != j and degree[q] <= half and len(free[j] & free[q]) >= 2
        )
        if not partners:
            break
        q = partners[0][1]
        v, w = sorted(free[j] & free[q])[:2]
        added += [(q, v), (w, q), (j, w), (v, j)]
        degree[j] += 1
        degree[q] += 1
        free[j] -= {v, w}
        free[q] -= {v, w}
        steps += 1
    g2 = _extended(ext.base, ext.omega, added)
    _audit_balance(g2)
    return EulerianExtension(
        ext.base,
        g2,
        ext.omega,
        tuple(added),
        degree,
        ext.checksum_lhs,
        ext.checksum_rhs,
        ext.boost_steps + steps,
        ext.diagnostics,
    )


def dankelmann_bound(n_prime: int, delta: int) -> Fraction:
    return Fraction(4 * n_prime, 2 * delta + 1) - 4


def knyazev_bound(n_prime: int, delta: int) -> Fraction:
    return Fraction(5 * n_prime, 2 * delta + 2)


@dataclass(frozen=True)
class BoundReport:
    original_order: int
    contracted_order: int
    omega_size: int
    n_prime: int
    delta: int
    delta_base: int
    dankelmann_bound: Fraction
    knyazev_bound: Fraction
    applicable: bool
    reason: str
    checksum_ok: bool
    measured_diameter: object = None
    contracted_diameter: object = None
    extension_diameter: object = None
    circumference_interval: tuple[Fraction, int] | None = None
    diagnostics: tuple[str, ...] = ()


def diameter_bound(g: Digraph, *, measure: bool = True, p: int | None = None) -> BoundReport:
    """Bound the diameter of strongly connected ``g`` from degree data.

    With ``measure`` the diameters of ``g``, its contraction and the final
    extension are also computed for comparison. Passing ``p`` adds the
    circumference interval for a p-Clan.
    """
    _require_scc(g)
    base, _ = contract_two_cycles(g)
    ext = boost_min_outdegree(eulerianize(base))
    n_prime, delta = ext.n_prime, ext.delta
    if base.order < 2:
        applicable, reason = False, "contracted base is a single vertex"
    elif delta < 2:
        applicable, reason = False, "delta < 2"
    elif 2 * delta > n_prime:
        applicable, reason = False, "delta > n'/2"
    elif _two_cycle_pairs(ext.graph):
        applicable, reason = False, "extension contains a 2-cycle"
    else:
        applicable, reason = True, "ok"
    return BoundReport(
        original_order=g.order,
        contracted_order=base.order,
        omega_size=len(ext.omega),
        n_prime=n_prime,
        delta=delta,
        delta_base=ext.delta_base,
        dankelmann_bound=dankelmann_bound(n_prime, delta),
        knyazev_bound=knyazev_bound(n_prime, delta),
        applicable=applicable,
        reason=reason,
        checksum_ok=ext.checksum_ok,
        measured_diameter=diameter(g) if measure else None,
        contracted_diameter=diameter(base) if measure else None,
        extension_diameter=diameter(ext.graph) if measure else None,
        circumference_interval=circumference_bounds(g, p) if p is not None and g.order >= 2 else None,
        diagnostics=ext.diagnostics,
    )


def circumference_bounds(g: Digraph, p: int) -> tuple[Fraction, int]:
    """Interval ``[m/(N-1), p+1]`` for the longest cycle of a p-Clan digraph.

    For ``p == 2`` and ``N >= 4`` the upper end is 2 (the bi-directed star);
    at ``N == 3`` the minimal 2-Clan is the triangle, so ``p + 1`` is kept.
    """
    n = g.order
    if n < 2:
        raise PreconditionError("need at least two vertices")
    upper = 2 if p == 2 and n >= 4 else p + 1
    return Fraction(g.size, n - 1), upper


def circumference(g: Digraph) -> int:
    """Exact longest directed cycle length (0 when acyclic).

    Enumerates simple cycles rooted at their smallest vertex; exponential,
    meant for small graphs.
    """
    order = {v: i for i, v in enumerate(g.vertices)}
    succ = [[order[w] for w in g.successors(v)] for v in g.vertices]
    n = len(succ)
    best = 0
    for root in range(n):
        if best >= n - root:
            break
        stack = [(root, iter(succ[root]), 1)]
        on_path = {root}
        while stack:
            v, it, depth = stack[-1]
            for w in it:
                if w == root:
                    best = max(best, depth)
                elif w > root and w not in on_path:
                    on_path.add(w)
                    stack.append((w, iter(succ[w]), depth + 1))
                    break
            else:
                stack.pop()
                on_path.discard(v)
    return best
