"""End-to-end acceptance suite; each test prints one PASS/FAIL line."""

from __future__ import annotations

import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from cbnet.accessibility import analyze_structure
from cbnet.bounds import circumference, diameter_bound, eulerianize
from cbnet.constructions import (
    Agreement,
    Branch,
    Family,
    construct_mka,
    construct_mpc,
    hamiltonian_cycle,
    model1_closed_form,
    model1_closed_form_objective,
    model1_window_ok,
    mstar,
    mstar_formula,
    oracle_min_pclan,
    solve_model1,
)
from cbnet.errors import PreconditionError
from cbnet.formats import parse_edge_list
from cbnet.generator import generate
from cbnet.graph_core import (
    accessibility_profile,
    assortativity,
    build_digraph,
    diameter,
    is_strongly_connected,
    tarjan_scc,
)
from cbnet.reduction import check_removal, greedy_max_removal
from helpers import bistar, mutual_reach_partition, random_dag, random_digraph, random_scc, relabel

DATA = Path(__file__).parent / "data"


@pytest.fixture
def verdict(capsys):
    def report(number: int, title: str, failures: list[str], detail: str = "") -> None:
        status = "PASS" if not failures else "FAIL"
        extra = f" ({detail})" if detail else ""
        with capsys.disabled():
            print(f"\n[acceptance {number:2d}] {status}: {title}{extra}")
            for line in failures[:5]:
                print(f"    {line}")
        assert not failures, f"{len(failures)} violations, first: {failures[0]}"

    return report


def test_01_table_and_oracle(verdict):
    expected = {(3, 1): 6, (4, 1): 12, (5, 1): 20, (3, 2): 3, (4, 2): 6, (4, 3): 4,
                (5, 2): 8, (5, 3): 7, (5, 4): 5}  # fmt: skip
    formula_high = {(3, 2), (4, 3), (5, 4)}
    bad = []
    for (n, p), want in expected.items():
        got = oracle_min_pclan(n, p).min_edges
        if got != want:
            bad.append(f"oracle({n},{p}) = {got}, table {want}")
        res = mstar(n, p, oracle=True)
        if (n, p) in formula_high and res.agreement is not Agreement.FORMULA_HIGH:
            bad.append(f"({n},{p}) agreement {res.agreement}, expected formula_high")
        if (n, p) not in formula_high and res.agreement is not Agreement.MATCH:
            bad.append(f"({n},{p}) agreement {res.agreement}, expected match")
    verdict(1, "table values and oracle agreement, N <= 5", bad)


def test_02_model1_closed_form(verdict):
    bad, checked = [], 0
    for n in range(2, 16):
        for k in range(n):
            if not model1_window_ok(n, k):
                continue
            try:
                sol = solve_model1(n, k)
            except PreconditionError:
                continue
            checked += 1
            closed = model1_closed_form_objective(n, k)
            if abs(float(sol.objective - closed)) > 1e-12:
                bad.append(f"(N={n},k={k}) optimum {sol.objective} < closed form {closed}")
            elif model1_closed_form(n, k) not in {sol.counts, *sol.ties}:
                bad.append(f"(N={n},k={k}) count vector differs from closed form")
    spot = solve_model1(10, 3).objective
    if spot != 2:
        bad.insert(0, f"spot (10,3): exhaustive objective {spot}, expected 2.0")
    verdict(2, "accessibility-count model closed form, N <= 15", bad, f"{checked} pairs checked")


def test_03_mka_certification(verdict):
    bad, count = [], 0
    for n in range(3, 201):
        for k in range(n // 2, n):
            if not 2 * k > n - 2:
                continue
            count += 1
            g = construct_mka(n, k).graph
            comps = tarjan_scc(g)
            prof = accessibility_profile(g)
            problems = []
            if g.size != n:
                problems.append(f"{g.size} edges")
            if len(comps[0]) != k + 1 or any(len(c) > 1 for c in comps[1:]):
                problems.append("SCC structure")
            if abs(float(prof.mean - Fraction((k + 1) * (n - 1), n))) > 1e-12:
                problems.append(f"mean {prof.mean}")
            if abs(float(prof.msd(k) - (1 - Fraction(k + 1, n)))) > 1e-12:
                problems.append(f"msd {prof.msd(k)}")
            rep = analyze_structure(g, profile=prof)
            if rep is None or rep.k != k or rep.gscc_order != k + 1:
                problems.append("round trip")
            if problems:
                bad.append(f"(N={n},k={k}): {', '.join(problems)}")
    verdict(3, "minimal k-accessible constructions, N <= 200", bad, f"{count} graphs")


def test_04_mpc_certification(verdict):
    bad, count = [], 0
    for n in range(3, 41):
        for p in range(2, n):
            r = construct_mpc(n, p)
            count += 1
            if diameter(r.graph) != p:
                bad.append(f"(N={n},p={p}) diameter {diameter(r.graph)}")
            value, branch = mstar_formula(n, p)
            if r.family is Family.MPC_SEMISTAR and branch is Branch.DIVISIBLE:
                value = 2 * n - p  # odd p: the divisible branch has no construction
            if p == 2:
                value = 2 * (n - 1)
            if r.graph.size != value:
                bad.append(f"(N={n},p={p}) {r.graph.size} edges, branch claims {value}")
    for n in range(3, 6):
        for p in range(2, n):
            best = construct_mpc(n, p).graph.size
            if p == n - 1:
                best = min(best, hamiltonian_cycle(n).graph.size)
            opt = oracle_min_pclan(n, p).min_edges
            if best != opt:
                bad.append(f"(N={n},p={p}) best construction {best}, oracle {opt}")
    verdict(4, "minimal p-Clan constructions", bad, f"{count} graphs")


def test_05_acyclic_mean_accessibility(verdict):
    rng = random.Random(5)
    bad = []
    for i in range(1000):
        n = rng.randint(1, 50)
        g = random_dag(rng, n, rng.uniform(0.0, 0.5))
        mean = accessibility_profile(g).mean
        if mean > Fraction(n - 1, 2):
            bad.append(f"graph {i}: N={n} mean {mean}")
    verdict(5, "acyclic digraphs have mean accessibility <= (N-1)/2", bad, "1000 DAGs")


def test_06_diameter_bound_pipeline(verdict):
    bad = []
    with open(DATA / "engineered_scc.csv", encoding="utf-8") as fh:
        rep = diameter_bound(parse_edge_list(fh))
    shape = (rep.contracted_order, rep.omega_size, rep.delta)
    if shape != (23, 10, 6):
        bad.append(f"engineered SCC shape {shape}")
    if abs(float(rep.dankelmann_bound) - 6.153846153846) > 1e-9:
        bad.append(f"engineered bound {float(rep.dankelmann_bound)}")
    if rep.measured_diameter > rep.dankelmann_bound:
        bad.append(f"engineered diameter {rep.measured_diameter} exceeds bound")
    rng = random.Random(6)
    applicable = attempts = original_over = extension_over = knyazev_over = 0
    while applicable < 100:
        attempts += 1
        g = random_scc(rng, rng.randint(4, 40), rng.uniform(0.02, 0.35))
        r = diameter_bound(g)
        if not r.applicable:
            continue
        applicable += 1
        original_over += r.measured_diameter > r.dankelmann_bound
        extension_over += r.extension_diameter > r.dankelmann_bound
        knyazev_over += r.contracted_diameter > r.knyazev_bound
        if r.contracted_diameter > r.dankelmann_bound:
            bad.append(
                f"random SCC {applicable}: base order {r.contracted_order} n'={r.n_prime} "
                f"delta={r.delta} base diameter {r.contracted_diameter} "
                f"> bound {float(r.dankelmann_bound):.4f}"
            )
    detail = (
        f"100 applicable of {attempts} random SCCs; over bound: original {original_over}, "
        f"extension {extension_over}; "
        f"base diameter over the 5n'/(2delta+2) bound {knyazev_over}"
    )
    verdict(6, "diameter bound on engineered and random SCCs", bad, detail)


def test_07_eulerian_extension(verdict):
    rng = random.Random(7)
    bad = []
    for i in range(500):
        g = random_scc(rng, rng.randint(2, 60), rng.uniform(0.0, 0.2))
        ext = eulerianize(g)
        h = ext.graph
        if any(h.in_degree(v) != h.out_degree(v) for v in h.vertices):
            bad.append(f"graph {i}: unbalanced vertex")
        if ext.checksum_lhs != 2 * len(ext.omega):
            bad.append(f"graph {i}: sum d_i - m = {ext.checksum_lhs} != 2|Omega| = {2 * len(ext.omega)}")
        if not is_strongly_connected(h) and not ext.diagnostics:
            bad.append(f"graph {i}: lost strong connectivity silently")
    verdict(7, "Eulerian extension invariants", bad, "500 SCCs")


def _clan_pool(rng: random.Random):
    oracle = {
        (n, p): oracle_min_pclan(n, p).witness for n in range(3, 6) for p in range(2, n)
    }
    while True:
        n = rng.randint(3, 8)
        choice = rng.randrange(3)
        if choice == 0 and n <= 5:
            p = rng.randint(2, n - 1)
            g = oracle[(n, p)]
        elif choice == 1:
            p, g = n - 1, hamiltonian_cycle(n).graph
        else:
            p = rng.randint(2, n - 1)
            g = construct_mpc(n, p).graph
        yield relabel(g, rng), p


def test_08_circumference_sandwich(verdict):
    rng = random.Random(8)
    bad = []
    pool = _clan_pool(rng)
    for i in range(200):
        g, p = next(pool)
        if not is_strongly_connected(g) or diameter(g) > p:
            bad.append(f"clan {i}: not a certified {p}-Clan")
            continue
        c = circumference(g)
        lo = Fraction(g.size, g.order - 1)
        if not lo <= c <= p + 1:
            bad.append(f"clan {i}: N={g.order} m={g.size} p={p} circumference {c}")
    for n in range(3, 9):
        if circumference(bistar(n)) != 2:
            bad.append(f"bi-directed star N={n}: circumference {circumference(bistar(n))}")
    verdict(8, "circumference sandwich on certified p-Clans, N <= 8", bad, "200 clans")


def test_09_scc_oracle(verdict):
    rng = random.Random(9)
    bad = []
    for i in range(500):
        g = random_digraph(rng, rng.randint(1, 60), rng.uniform(0.0, 0.12))
        if set(tarjan_scc(g)) != mutual_reach_partition(g):
            bad.append(f"graph {i}: partitions differ")
    verdict(9, "Tarjan partition equals mutual reachability", bad, "500 digraphs")


def test_10_generator_round_trip(verdict):
    net = generate()
    rep = analyze_structure(net.graph, strict=False)
    bad = []
    if rep is None:
        bad.append("default network not detected as k-accessible")
    else:
        missing = set(net.parents) - rep.gscc
        if missing:
            bad.append(f"{len(missing)} parents outside the GSCC")
        if rep.gscc_order > rep.k + 1:
            bad.append(f"GSCC order {rep.gscc_order} > k+1 = {rep.k + 1}")
    comp_of = {v: i for i, c in enumerate(tarjan_scc(net.graph)) for v in c}
    split = [b for p, own in net.branches.items() for b in own if comp_of[b] != comp_of[p]]
    if split:
        bad.append(f"{len(split)} branches outside their parent's SCC")
    r = assortativity(net.graph)
    if r is None or r >= 0:
        bad.append(f"assortativity {r}")
    detail = f"k={rep.k}, GSCC {rep.gscc_order}, r={r:.3f}" if rep and r is not None else ""
    verdict(10, "default generator network structure", bad, detail)


def _planted_redundant(rng: random.Random):
    base = random_scc(rng, rng.randint(4, 25), rng.uniform(0.0, 0.2))
    edges = list(base.edges())
    for x in rng.sample(list(base.vertices), rng.randint(1, 3)):
        t = f"{x}~twin"
        edges += [(u, t) for u in base.predecessors(x)] + [(t, w) for w in base.successors(x)]
    return build_digraph(edges)


def _cut_vertex_scc(rng: random.Random):
    left = random_scc(rng, rng.randint(3, 15), rng.uniform(0.0, 0.3))
    right = random_scc(rng, rng.randint(3, 15), rng.uniform(0.0, 0.3))
    ren_l = {v: "cut" if v == left.vertices[0] else f"L{v}" for v in left.vertices}
    ren_r = {v: "cut" if v == right.vertices[0] else f"R{v}" for v in right.vertices}
    edges = [(ren_l[u], ren_l[v]) for u, v in left.edges()]
    edges += [(ren_r[u], ren_r[v]) for u, v in right.edges()]
    return build_digraph(edges)


def test_11_reduction_soundness(verdict):
    rng = random.Random(11)
    bad = []
    for i in range(50):
        g = _planted_redundant(rng)
        removed, _ = greedy_max_removal(g, g.vertices)
        keep = [v for v in g.vertices if v not in removed]
        rebuilt = build_digraph(
            [(u, v) for u, v in g.edges() if u not in removed and v not in removed]
        )
        fresh = check_removal(g, g.vertices, removed)
        ok = (
            fresh.feasible
            and set(rebuilt.vertices) == set(keep)
            and is_strongly_connected(rebuilt)
            and diameter(rebuilt) <= diameter(g)
        )
        if not ok:
            bad.append(f"redundant SCC {i}: removal {sorted(removed)} fails the fresh check")
        if not removed:
            bad.append(f"redundant SCC {i}: nothing removed")
    for i in range(50):
        g = _cut_vertex_scc(rng)
        if check_removal(g, g.vertices, ["cut"]).feasible:
            bad.append(f"cut-vertex SCC {i}: removal reported feasible")
    verdict(11, "reduction soundness on engineered SCCs", bad, "50 + 50 graphs")


def _cli(*args: str) -> str:
    proc = subprocess.run(
        [sys.executable, "-m", "cbnet.cli", *args], capture_output=True, text=True, check=True
    )
    return proc.stdout


def test_12_determinism(verdict):
    fixture = str(DATA / "fixture_network.csv")
    bad = []
    if _cli("analyze", fixture) != _cli("analyze", fixture):
        bad.append("analyze reports differ")
    a, b = _cli("generate", "--seed", "42"), _cli("generate", "--seed", "42")
    if sorted(parse_edge_list(a.splitlines()).edges()) != sorted(parse_edge_list(b.splitlines()).edges()):
        bad.append("generated edge sets differ")
    if a != b:
        bad.append("generated files differ byte-wise")
    verdict(12, "byte-identical analyze and generate runs", bad)
