"""Extremal digraphs: minimal k-accessible and minimal p-Clan constructions.

Every :class:`ConstructionResult` is certified by measuring the built graph
(edge count, SCC orders, BFS diameter, accessibility moments) and comparing
against the closed forms; a disagreement raises instead of returning.

The exact minimum edge count of a p-Clan digraph (strongly connected,
diameter <= p) is found by :func:`oracle_min_pclan`, an exhaustive search
over out-degree sequences for N <= 6.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path

from .errors import CapacityError, ConstructionError, InfeasibleError, PreconditionError
from .graph_core import (
    INFINITE,
    Digraph,
    accessibility_profile,
    build_digraph,
    diameter,
    tarjan_scc,
)

ORACLE_MAX_N = 6
MODEL1_EXHAUSTIVE_MAX_N = 20


# ---- accessibility-count model -------------------------------------------------


@dataclass(frozen=True)
class AccessibilityCountSolution:
    """Counts ``x[e]`` of vertices with accessibility ``e``.

    ``objective`` is the mean squared deviation of accessibility from ``k``.
    ``ties`` holds every other count vector reaching the same objective.
    """

    n: int
    k: int
    counts: tuple[int, ...]
    objective: Fraction
    exhaustive: bool
    ties: tuple[tuple[int, ...], ...] = ()

    @property
    def mean(self) -> Fraction:
        return Fraction(sum(e * x for e, x in enumerate(self.counts)), self.n)


def model1_window_ok(n: int, k: int) -> bool:
    return n < (k + 1) * (k + 2) < 3 * n


def model1_closed_form(n: int, k: int) -> tuple[int, ...]:
    """The spanning-tree profile: one vertex at each level 0..k, the rest at k+1."""
    counts = [0] * n
    for e in range(k + 1):
        counts[e] = 1
    counts[k + 1] = n - k - 1
    return tuple(counts)


def model1_closed_form_objective(n: int, k: int) -> Fraction:
    return Fraction(k * (k + 1) * (2 * k + 1), 6 * n) + 1 - Fraction(k + 1, n)


def model1_objective(counts: tuple[int, ...], k: int) -> Fraction:
    n = sum(counts)
    return Fraction(sum(x * (k - e) ** 2 for e, x in enumerate(counts)), n)


def model1_feasible(counts: tuple[int, ...], k: int) -> bool:
    """Check a count vector against every constraint of the model."""
    n = sum(counts)
    if len(counts) > n or n == 0:
        return False
    if not 1 <= counts[0] <= n - 1:
        return False
    used = 0
    for e, x in enumerate(counts):
        if x < 0 or x > n - used:
            return False
        if e > 0 and x > 0 and counts[e - 1] == 0:
            return False
        used += x
    total = sum(e * x for e, x in enumerate(counts))
    return n * (2 * k - 1) < 2 * total < n * (2 * k + 1)


def solve_model1(n: int, k: int) -> AccessibilityCountSolution:
    """Minimum-MSD accessibility count vector for an acyclic order-``n`` digraph.

    Exhaustive for ``n <= 20``: count vectors without gaps are compositions of
    ``n``, searched depth-first with cost pruning. Larger ``n`` returns the
    closed-form profile.
    """
    if n < 4:
        raise PreconditionError(f"N must be >= 4, got {n}")
    if not model1_window_ok(n, k):
        raise InfeasibleError(
            f"(N={n}, k={k}) violates N < (k+1)(k+2) < 3N: (k+1)(k+2)={(k + 1) * (k + 2)}"
        )
    if n > MODEL1_EXHAUSTIVE_MAX_N:
        counts = model1_closed_form(n, k)
        return AccessibilityCountSolution(n, k, counts, model1_objective(counts, k), False)

    lo, hi = n * (2 * k - 1), n * (2 * k + 1)
    best_cost = math.inf
    best: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def search(level: int, remaining: int, acc_sum: int, cost: int) -> None:
        nonlocal best_cost, best
        if cost > best_cost:
            return
        if remaining == 0:
            if prefix[0] <= n - 1 and lo < 2 * acc_sum < hi:
                vec = tuple(prefix)
                if cost < best_cost:
                    best_cost, best = cost, [vec]
                else:
                    best.append(vec)
            return
        # largest reachable total: stack the rest one per level then at the top
        if 2 * (acc_sum + remaining * (level + remaining - 1)) <= lo:
            return
        if 2 * (acc_sum + remaining * level) >= hi:
            return
        for x in range(1, remaining + 1):
            prefix.append(x)
            search(level + 1, remaining - x, acc_sum + x * level, cost + x * (k - level) ** 2)
            prefix.pop()

    search(0, n, 0, 0)
    padded = sorted(tuple(v) + (0,) * (n - len(v)) for v in best)
    return AccessibilityCountSolution(
        n, k, padded[0], Fraction(int(best_cost), n), True, tuple(padded[1:])
    )


# ---- certified constructions ---------------------------------------------------


class Family(str, Enum):
    MKA = "mka"
    MPC_STAR = "mpc_star"
    MPC_MULTIFOLD = "mpc_multifold"
    MPC_SEMISTAR = "mpc_semistar"
    HAMILTONIAN_CYCLE = "hamiltonian_cycle"


@dataclass(frozen=True)
class Certificate:
    edge_count: int
    scc_orders: tuple[int, ...]
    diameter: object
    mean_acc: Fraction
    msd_from_k: Fraction | None = None


@dataclass(frozen=True)
class ConstructionResult:
    graph: Digraph
    family: Family
    certified: Certificate
    claimed_edges: int
    params: dict = field(default_factory=dict)
    note: str | None = None


def _ids(n: int) -> list[str]:
    width = len(str(n - 1))
    return [f"v{i:0{width}d}" for i in range(n)]


def _certify(g: Digraph, k: int | None = None) -> Certificate:
    prof = accessibility_profile(g)
    return Certificate(
        edge_count=g.size,
        scc_orders=tuple(len(c) for c in tarjan_scc(g)),
        diameter=diameter(g),
        mean_acc=prof.mean,
        msd_from_k=prof.msd(k) if k is not None else None,
    )


def _require(cond: bool, family: Family, what: str) -> None:
    if not cond:
        raise ConstructionError(f"{family.value} certification failed: {what}")


def construct_mka(n: int, k: int) -> ConstructionResult:
    """A (k+1)-cycle plus n-k-1 sources, each with one edge into the cycle.

    Sources attach round-robin to the cycle vertices.
    """
    if not (2 * k > n - 2 and 1 <= k <= n - 1):
        raise PreconditionError(f"need N/2 - 1 < k <= N - 1, got N={n}, k={k}")
    ids = _ids(n)
    cycle, sources = ids[: k + 1], ids[k + 1 :]
    edges = [(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))]
    edges += [(s, cycle[j % len(cycle)]) for j, s in enumerate(sources)]
    g = build_digraph(edges)
    cert = _certify(g, k)
    fam = Family.MKA
    _require(cert.edge_count == n, fam, f"edge count {cert.edge_count} != {n}")
    _require(cert.scc_orders[0] == k + 1, fam, f"largest SCC {cert.scc_orders[0]} != {k + 1}")
    _require(all(s == 1 for s in cert.scc_orders[1:]), fam, "more than one non-trivial SCC")
    _require(cert.mean_acc == (k + 1) * (1 - Fraction(1, n)), fam, f"mean {cert.mean_acc}")
    _require(cert.msd_from_k == 1 - Fraction(k + 1, n), fam, f"msd {cert.msd_from_k}")
    expected_diam = k if n == k + 1 else INFINITE
    _require(cert.diameter == expected_diam, fam, f"diameter {cert.diameter}")
    return ConstructionResult(g, fam, cert, n, {"N": n, "k": k})


def hamiltonian_cycle(n: int) -> ConstructionResult:
    if n < 3:
        raise PreconditionError(f"N must be >= 3, got {n}")
    ids = _ids(n)
    g = build_digraph((ids[i], ids[(i + 1) % n]) for i in range(n))
    cert = _certify(g)
    fam = Family.HAMILTONIAN_CYCLE
    _require(cert.edge_count == n and cert.scc_orders == (n,), fam, "not a single n-cycle")
    _require(cert.diameter == n - 1, fam, f"diameter {cert.diameter}")
    return ConstructionResult(g, fam, cert, n, {"N": n, "p": n - 1})


def construct_mpc(n: int, p: int) -> ConstructionResult:
    """Sparse p-Clan digraph: bi-directed star, multifold star or semi-star.

    * ``p == 2``: bi-directed star, ``2(N-1)`` edges.
    * ``p`` even with ``p | 2(N-1)``: ``L = 2(N-1)/p`` cycles of ``p/2 + 1``
      vertices sharing the hub, ``(1 + 2/p)(N-1)`` edges.
    * otherwise: a p-cycle whose first vertex carries ``N-p`` bi-directed
      leaves, ``2N - p`` edges. Odd ``p`` dividing ``2(N-1)`` lands here too.
    """
    if n < 3 or not 2 <= p <= n - 1:
        raise PreconditionError(f"need N >= 3 and 2 <= p <= N-1, got N={n}, p={p}")
    ids = _ids(n)
    hub, rest = ids[0], ids[1:]
    note = None
    if p == 2:
        fam = Family.MPC_STAR
        edges = [(hub, v) for v in rest] + [(v, hub) for v in rest]
        claimed = 2 * (n - 1)
    elif p % 2 == 0 and (2 * (n - 1)) % p == 0:
        fam = Family.MPC_MULTIFOLD
        fold = p // 2
        edges = []
        for start in range(0, n - 1, fold):
            ring = [hub] + rest[start : start + fold]
            edges += [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]
        claimed = (n - 1) + 2 * (n - 1) // p
    else:
        fam = Family.MPC_SEMISTAR
        cycle, leaves = ids[:p], ids[p:]
        edges = [(cycle[i], cycle[(i + 1) % p]) for i in range(p)]
        edges += [(hub, v) for v in leaves] + [(v, hub) for v in leaves]
        claimed = 2 * n - p
        if (2 * (n - 1)) % p == 0:
            note = (
                f"p={p} is odd and divides 2(N-1); no multifold exists, "
                f"semi-star gives {claimed} edges vs formula {mstar_formula(n, p)[0]}"
            )
    g = build_digraph(edges)
    cert = _certify(g)
    _require(cert.edge_count == claimed, fam, f"edge count {cert.edge_count} != {claimed}")
    _require(cert.scc_orders == (n,), fam, "not strongly connected")
    _require(cert.diameter == p, fam, f"BFS diameter {cert.diameter} != {p}")
    return ConstructionResult(g, fam, cert, claimed, {"N": n, "p": p}, note)


# ---- m*(N, p) -----------------------------------------------------------------


class Branch(str, Enum):
    COMPLETE = "complete"
    DIVISIBLE = "divisible"
    REMAINDER = "remainder"


class Agreement(str, Enum):
    MATCH = "match"
    FORMULA_HIGH = "formula_high"
    FORMULA_LOW = "formula_low"


@dataclass(frozen=True)
class MStarResult:
    n: int
    p: int
    formula_value: int
    branch: Branch
    oracle_value: int | None = None

    @property
    def agreement(self) -> Agreement | None:
        if self.oracle_value is None:
            return None
        if self.formula_value == self.oracle_value:
            return Agreement.MATCH
        if self.formula_value > self.oracle_value:
            return Agreement.FORMULA_HIGH
        return Agreement.FORMULA_LOW

    @property
    def best_known(self) -> int:
        return self.oracle_value if self.oracle_value is not None else self.formula_value


def mstar_formula(n: int, p: int) -> tuple[int, Branch]:
    if p == 1:
        return n * (n - 1), Branch.COMPLETE
    if (2 * (n - 1)) % p == 0:
        value = Fraction(p + 2, p) * (n - 1)
        return int(value), Branch.DIVISIBLE
    return 2 * n - p, Branch.REMAINDER


def mstar(n: int, p: int, *, oracle: bool = False, cache: OracleCache | None = None) -> MStarResult:
    if n < 3 or not 1 <= p <= n - 1:
        raise PreconditionError(f"need N >= 3 and 1 <= p <= N-1, got N={n}, p={p}")
    value, branch = mstar_formula(n, p)
    oracle_value = oracle_min_pclan(n, p, cache=cache).min_edges if oracle else None
    return MStarResult(n, p, value, branch, oracle_value)


# ---- exhaustive oracle ------------------------------------------------------------


@dataclass(frozen=True)
class OracleResult:
    n: int
    p: int
    min_edges: int
    witness: Digraph
    witness_arcs: tuple[tuple[int, int], ...]


class OracleCache:
    """Persistent ``N,p,min_m`` table shared across runs."""

    header = "# N,p,min_m"

    def __init__(self, path: str | Path | None = None) -> None:
        self.path = Path(path) if path is not None else None
        self._table: dict[tuple[int, int], int] = {}
        if self.path is not None and self.path.exists():
            self.load()

    def load(self) -> None:
        for lineno, line in enumerate(self.path.read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                n, p, m = (int(x) for x in line.split(","))
            except ValueError as exc:
                raise ValueError(f"{self.path}:{lineno}: bad cache line {line!r}") from exc
            self._table[(n, p)] = m

    def save(self) -> None:
        if self.path is None:
            return
        lines = [self.header] + [f"{n},{p},{m}" for (n, p), m in sorted(self._table.items())]
        self.path.write_text("\n".join(lines) + "\n")

    def get(self, n: int, p: int) -> int | None:
        return self._table.get((n, p))

    def put(self, n: int, p: int, m: int) -> None:
        self._table[(n, p)] = m

    def __len__(self) -> int:
        return len(self._table)


_memo: dict[tuple[int, int], OracleResult] = {}
_memo_lock = threading.Lock()


def _within_diameter(out: tuple[int, ...], n: int, p: int) -> bool:
    full = (1 << n) - 1
    for s in range(n):
        reach = frontier = 1 << s
        for _ in range(p):
            nxt = 0
            f = frontier
            while f:
                b = f & -f
                nxt |= out[b.bit_length() - 1]
                f ^= b
            nxt &= ~reach
            if not nxt:
                break
            reach |= nxt
            frontier = nxt
        if reach != full:
            return False
    return True


def _degree_sequences(n: int, m: int):
    """Non-increasing out-degree sequences in [1, n-1] summing to m."""

    def rec(i: int, rem: int, cap: int):
        if i == n:
            if rem == 0:
                yield ()
            return
        left = n - i - 1
        for d in range(min(cap, rem - left), 0, -1):
            if rem - d > left * d:
                break
            for rest in rec(i + 1, rem - d, d):
                yield (d,) + rest

    yield from rec(0, m, n - 1)


def _moore_ok(seq: tuple[int, ...], n: int, p: int) -> bool:
    top = seq[0]
    reach_factor = sum(top**j for j in range(p))
    return seq[-1] * reach_factor >= n - 1


def _witnesses(n: int, p: int, m: int) -> list[tuple[int, ...]]:
    full = (1 << n) - 1
    others = [[j for j in range(n) if j != i] for i in range(n)]
    masks = {
        (i, d): [sum(1 << j for j in c) for c in itertools.combinations(others[i], d)]
        for i in range(n)
        for d in range(1, n)
    }
    found = []
    for seq in _degree_sequences(n, m):
        if not _moore_ok(seq, n, p):
            continue
        for out in itertools.product(*(masks[(i, d)] for i, d in enumerate(seq))):
            inbound = 0
            for o in out:
                inbound |= o
            if inbound == full and _within_diameter(out, n, p):
                found.append(out)
    return found


def _lexmin_arcs(out: tuple[int, ...], n: int) -> tuple[tuple[int, int], ...]:
    """Smallest sorted arc tuple over all relabellings of ``out``."""
    succ = [[j for j in range(n) if out[i] >> j & 1] for i in range(n)]
    top = max(len(s) for s in succ)
    best = None
    for root in (i for i in range(n) if len(succ[i]) == top):
        head = succ[root]
        tail = [v for v in range(n) if v != root and v not in head]
        for hp in itertools.permutations(head):
            for tp in itertools.permutations(tail):
                label = {root: 0}
                label.update({v: i + 1 for i, v in enumerate(hp)})
                label.update({v: i + 1 + top for i, v in enumerate(tp)})
                arcs = tuple(sorted((label[u], label[v]) for u in range(n) for v in succ[u]))
                if best is None or arcs < best:
                    best = arcs
    return best


def oracle_min_pclan(n: int, p: int, *, cache: OracleCache | None = None) -> OracleResult:
    """Exact minimum arc count of a strongly connected order-``n`` digraph
    with diameter at most ``p``, with the lexicographically smallest witness.

    Arc counts are tried in ascending order; at each count every non-increasing
    out-degree sequence is expanded, which covers every digraph up to
    relabelling.
    """
    if n > ORACLE_MAX_N:
        raise CapacityError(
            f"exhaustive search is limited to N <= {ORACLE_MAX_N}; "
            "use construct_mpc/hamiltonian_cycle for certified upper bounds"
        )
    if n < 2 or not 1 <= p <= n - 1:
        raise PreconditionError(f"need 2 <= N and 1 <= p <= N-1, got N={n}, p={p}")
    with _memo_lock:
        hit = _memo.get((n, p))
    if hit is None:
        start = cache.get(n, p) if cache is not None else None
        m = start if start is not None else n
        while True:
            found = _witnesses(n, p, m)
            if found:
                break
            m += 1
        arcs = min(_lexmin_arcs(out, n) for out in found)
        ids = _ids(n)
        witness = build_digraph((ids[u], ids[v]) for u, v in arcs)
        hit = OracleResult(n, p, m, witness, arcs)
        with _memo_lock:
            _memo[(n, p)] = hit
    if cache is not None and cache.get(n, p) is None:
        cache.put(n, p, hit.min_edges)
    return hit
