"""Graph builders and independent oracles shared by the test modules."""

from __future__ import annotations

import random
from collections import deque
from itertools import permutations

import networkx as nx

from cbnet.graph_core import Digraph, VertexRecord, build_digraph


def vid(i: int) -> str:
    return f"v{i:03d}"


def cycle(n: int) -> Digraph:
    return build_digraph((vid(i), vid((i + 1) % n)) for i in range(n))


def complete(n: int) -> Digraph:
    return build_digraph((vid(i), vid(j)) for i in range(n) for j in range(n) if i != j)


def bistar(n: int) -> Digraph:
    """Hub v000 with n-1 bi-directed leaves."""
    edges = [(vid(0), vid(i)) for i in range(1, n)]
    return build_digraph(edges + [(b, a) for a, b in edges])


def random_digraph(rng: random.Random, n: int, p: float) -> Digraph:
    edges = [(vid(u), vid(v)) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    g = build_digraph(edges)
    missing = {vid(i) for i in range(n)} - set(g.vertices)
    if missing:  # keep isolated vertices
        recs = dict(g.records)
        recs.update({v: VertexRecord(v) for v in missing})
        g = Digraph(recs, {v: g.successors(v) for v in g.vertices})
    return g


def random_dag(rng: random.Random, n: int, p: float) -> Digraph:
    order = list(range(n))
    rng.shuffle(order)
    edges = [
        (vid(order[i]), vid(order[j])) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    g = build_digraph(edges)
    recs = {vid(i): VertexRecord(vid(i)) for i in range(n)}
    return Digraph(recs, {v: g.successors(v) for v in g.vertices})


def random_scc(rng: random.Random, n: int, p: float) -> Digraph:
    """Random digraph made strongly connected by a shuffled Hamiltonian cycle."""
    perm = list(range(n))
    rng.shuffle(perm)
    edges = [(vid(perm[i]), vid(perm[(i + 1) % n])) for i in range(n)]
    edges += [(vid(u), vid(v)) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return build_digraph(edges)


def relabel(g: Digraph, rng: random.Random, prefix: str = "x") -> Digraph:
    names = list(g.vertices)
    shuffled = names[:]
    rng.shuffle(shuffled)
    m = {a: f"{prefix}{b}" for a, b in zip(names, shuffled)}
    return build_digraph((m[u], m[v]) for u, v in g.edges())


def to_nx(g: Digraph) -> nx.DiGraph:
    h = nx.DiGraph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges())
    return h


def bfs_dist(g: Digraph, s: str) -> dict[str, int]:
    dist = {s: 0}
    q = deque([s])
    while q:
        u = q.popleft()
        for w in g.successors(u):
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def mutual_reach_partition(g: Digraph) -> set[frozenset[str]]:
    reach = {v: set(bfs_dist(g, v)) for v in g.vertices}
    classes = set()
    for v in g.vertices:
        classes.add(frozenset(w for w in g.vertices if w in reach[v] and v in reach[w]))
    return classes


def longest_cycle_bruteforce(g: Digraph) -> int:
    """Longest cycle by trying every vertex sequence; tiny graphs only."""
    vs = g.vertices
    best = 0
    for r in range(2, len(vs) + 1):
        for seq in permutations(vs, r):
            if seq[0] != min(seq):
                continue
            if all(g.has_edge(seq[i], seq[(i + 1) % r]) for i in range(r)):
                best = r
                break
    return best
