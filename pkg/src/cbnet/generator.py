"""Seeded synthetic correspondent-banking networks with planted structure.

Parent banks form a strongly connected core. Each branch is tied to its
parent by a 2-cycle, so parents and branches together make up the giant SCC.
Sender-side banks feed into that core, receiver-side banks hang off it, and
customers sit at both ends. Attachment is preferential, giving a heavy-tailed
degree distribution and negative assortativity.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import PreconditionError
from .graph_core import Digraph, VertexKind, VertexRecord


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for :func:`generate`.

    Branch counts per parent follow a discrete Pareto law with the given mean
    and exponent. ``sender_count``/``receiver_count`` are customers;
    ``sender_banks``/``receiver_banks`` are banks outside the core.
    """

    seed: int = 42
    parents: int = 31
    branches_mean: float = 95.0
    branches_exponent: float = 2.5
    core_density: float = 0.15
    branch_extra_edges: float = 0.3
    sender_banks: int = 20
    receiver_banks: int = 100
    receiver_chain_fraction: float = 0.02
    sender_count: int = 200
    receiver_count: int = 200
    attach_exponent: float = 1.0

    def validate(self) -> None:
        if self.parents < 1:
            raise PreconditionError("parents must be >= 1")
        if min(self.sender_count, self.receiver_count) < 1:
            raise PreconditionError("sender_count and receiver_count must be >= 1")
        if min(self.sender_banks, self.receiver_banks) < 0:
            raise PreconditionError("bank counts must be non-negative")
        if self.branches_mean < 0 or self.branches_exponent <= 2:
            raise PreconditionError("need branches_mean >= 0 and branches_exponent > 2")
        for name in ("core_density", "branch_extra_edges", "receiver_chain_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise PreconditionError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class GeneratedNetwork:
    graph: Digraph
    config: GeneratorConfig
    parents: tuple[str, ...]
    branches: Mapping[str, tuple[str, ...]]
    sender_banks: tuple[str, ...]
    receiver_banks: tuple[str, ...]
    planted_gscc: frozenset[str] = field(default=frozenset())


def _branch_counts(rng: random.Random, cfg: GeneratorConfig) -> list[int]:
    a = cfg.branches_exponent
    xmin = cfg.branches_mean * (a - 2) / (a - 1)
    cap = max(1, int(20 * cfg.branches_mean))
    out = []
    for _ in range(cfg.parents):
        u = 1.0 - rng.random()  # (0, 1]
        out.append(min(cap, int(xmin * u ** (-1.0 / (a - 1)))))
    return out


def _width(n: int) -> int:
    return len(str(max(n, 1)))


def generate(config: GeneratorConfig = GeneratorConfig()) -> GeneratedNetwork:
    """Build a network; identical config and seed give an identical graph."""
    config.validate()
    rng = random.Random(config.seed)
    succ: dict[str, set[str]] = {}
    records: dict[str, VertexRecord] = {}

    def add_vertex(v: str, kind: VertexKind = VertexKind.BANK, parent: str | None = None) -> None:
        records[v] = VertexRecord(v, kind, parent)
        succ[v] = set()

    def add_edge(u: str, v: str) -> None:
        if u != v:
            succ[u].add(v)

    def degree(v: str) -> int:
        return len(succ[v]) + indeg[v]

    def pick(pool: list[str]) -> str:
        w = [(degree(v) + 1) ** config.attach_exponent for v in pool]
        return rng.choices(pool, weights=w)[0]

    pw = _width(config.parents)
    parents = [f"P{i:0{pw}d}" for i in range(1, config.parents + 1)]
    for p in parents:
        add_vertex(p)
    for i, p in enumerate(parents):
        if config.parents > 1:
            add_edge(p, parents[(i + 1) % config.parents])
        for q in parents:
            if q != p and rng.random() < config.core_density:
                add_edge(p, q)

    branches: dict[str, tuple[str, ...]] = {}
    for p, count in zip(parents, _branch_counts(rng, config)):
        bw = _width(count)
        own = tuple(f"{p}.b{j:0{bw}d}" for j in range(1, count + 1))
        for b in own:
            add_vertex(b, parent=p)
            add_edge(b, p)
            add_edge(p, b)
        branches[p] = own

    # in-degree bookkeeping from here on, for preferential choices
    indeg = {v: 0 for v in succ}
    for u, ts in succ.items():
        for v in ts:
            indeg[v] += 1

    def link(u: str, v: str) -> None:
        if u != v and v not in succ[u]:
            succ[u].add(v)
            indeg[v] += 1

    all_branches = [b for p in parents for b in branches[p]]
    for b in all_branches:
        if rng.random() < config.branch_extra_edges:
            target = pick(parents)
            link(b, target)

    core = parents + all_branches
    sw = _width(config.sender_banks)
    senders = [f"S{i:0{sw}d}" for i in range(1, config.sender_banks + 1)]
    for s in senders:
        add_vertex(s)
        indeg[s] = 0
        for _ in range(1 + (rng.random() < 0.5)):
            link(s, pick(parents))

    rw = _width(config.receiver_banks)
    receivers = [f"R{i:0{rw}d}" for i in range(1, config.receiver_banks + 1)]
    for i, r in enumerate(receivers):
        add_vertex(r)
        indeg[r] = 0
        if i > 0 and rng.random() < config.receiver_chain_fraction:
            link(pick(receivers[:i]), r)
        else:
            link(pick(core), r)

    cw = _width(max(config.sender_count, config.receiver_count))
    entry = senders + parents
    for i in range(1, config.sender_count + 1):
        c = f"cs{i:0{cw}d}"
        add_vertex(c, VertexKind.CUSTOMER)
        indeg[c] = 0
        link(c, pick(entry))
    exit_banks = receivers + parents if receivers else parents
    for i in range(1, config.receiver_count + 1):
        c = f"cr{i:0{cw}d}"
        add_vertex(c, VertexKind.CUSTOMER)
        indeg[c] = 0
        link(pick(exit_banks), c)

    g = Digraph(records, succ)
    return GeneratedNetwork(
        graph=g,
        config=config,
        parents=tuple(parents),
        branches=branches,
        sender_banks=tuple(senders),
        receiver_banks=tuple(receivers),
        planted_gscc=frozenset(core),
    )


def expected_core_accessibility(net: GeneratedNetwork) -> int:
    """Accessibility of every planted core bank within the bank subgraph."""
    return len(net.planted_gscc) - 1 + len(net.receiver_banks)


def powerlaw_vs_exponential(values: Sequence[float], xmin: float = 1) -> float:
    """Log-likelihood ratio of a continuous power law over an exponential.

    Both are fitted by maximum likelihood to the tail ``x >= xmin``; a
    positive result favours the power law.
    """
    tail = [float(x) for x in values if x >= xmin]
    if len(tail) < 2:
        raise PreconditionError("need at least two tail values")
    n = len(tail)
    logs = sum(math.log(x / xmin) for x in tail)
    if logs == 0:
        return 0.0
    alpha = 1 + n / logs
    ll_pl = n * math.log((alpha - 1) / xmin) - alpha * logs
    lam = 1.0 / (sum(tail) / n - xmin) if sum(tail) / n > xmin else float("inf")
    if math.isinf(lam):
        return 0.0
    ll_exp = n * math.log(lam) - lam * sum(x - xmin for x in tail)
    return ll_pl - ll_exp
