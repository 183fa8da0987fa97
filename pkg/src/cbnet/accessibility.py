"""k-accessibility detection and the structure it implies.

A network is k-accessible when it contains a core of vertices whose
accessibilities sit on a tight plateau around k. Inside that core lives a
unique giant SCC; everything that reaches it is sender-side, everything else
is receiver-side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

from .errors import ModelViolationError
from .graph_core import (
    AccessibilityProfile,
    Digraph,
    VertexKind,
    accessibility_profile,
    degrees,
    tarjan_scc,
)


class Role(str, Enum):
    SENDER = "sender"
    RECEIVER = "receiver"
    CORRESPONDENT_SENDER = "correspondent_sender"
    CORRESPONDENT_RECEIVER = "correspondent_receiver"
    INTERMEDIARY = "intermediary"
    GSCC_MEMBER = "gscc_member"


class Side(str, Enum):
    SENDER_SIDE = "sender_side"
    GSCC = "gscc"
    RECEIVER_SIDE = "receiver_side"


class MacroVerdict(str, Enum):
    SINK_LIKE = "sink_like"
    BRIDGE_LIKE = "bridge_like"


@dataclass(frozen=True)
class DetectionConfig:
    """Plateau search parameters.

    ``min_core_size=None`` means ``min(N, max(10, ceil(0.005 N)))``.
    ``plateau_tolerance`` is the allowed accessibility spread as a fraction of
    N; the spread is never narrower than one unit.
    """

    min_core_size: int | None = None
    plateau_tolerance: float = 0.01

    def core_size_for(self, n: int) -> int:
        if self.min_core_size is not None:
            return self.min_core_size
        return min(n, max(10, math.ceil(0.005 * n)))

    def width_for(self, n: int) -> float:
        return max(1.0, self.plateau_tolerance * n)


@dataclass(frozen=True)
class KDetection:
    k: int | None
    core: frozenset[str] = frozenset()
    window: tuple[int, int] | None = None

    @property
    def is_k_accessible(self) -> bool:
        return self.k is not None


NOT_K_ACCESSIBLE = KDetection(None)


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def detect_k(profile: AccessibilityProfile, config: DetectionConfig = DetectionConfig()) -> KDetection:
    """Find the accessibility plateau holding the most vertices.

    Sinks (accessibility 0) never join a plateau. Among equally large
    plateaus the one with the larger k wins.
    """
    n = profile.order
    items = sorted((a, v) for v, a in profile.acc.items() if a > 0)
    if not items:
        return NOT_K_ACCESSIBLE
    width = config.width_for(n)
    need = config.core_size_for(n)
    values = [a for a, _ in items]
    best: tuple[int, int, int, int] | None = None  # (count, k, lo, hi)
    hi = 0
    for lo in range(len(values)):
        if lo > 0 and values[lo] == values[lo - 1]:
            continue
        hi = max(hi, lo)
        while hi + 1 < len(values) and values[hi + 1] - values[lo] <= width:
            hi += 1
        count = hi - lo + 1
        if count < need:
            continue
        k = _round_half_up(Fraction(sum(values[lo : hi + 1]), count))
        key = (count, k, lo, hi)
        if best is None or key[:2] > best[:2]:
            best = key
    if best is None:
        return NOT_K_ACCESSIBLE
    _, k, lo, hi = best
    core = frozenset(v for _, v in items[lo : hi + 1])
    return KDetection(k, core, (values[lo], values[hi]))


@dataclass(frozen=True)
class GsccResult:
    vertices: frozenset[str]
    internal_edges: int
    diagnostic: str | None = None

    @property
    def order(self) -> int:
        return len(self.vertices)


def extract_gscc(g: Digraph, core: frozenset[str] | set[str]) -> GsccResult:
    """The unique largest non-trivial SCC meeting ``core``.

    Raises :class:`ModelViolationError` when two SCCs tie for largest.
    """
    if not core:
        raise ValueError("core must be non-empty")
    candidates = [c for c in tarjan_scc(g) if len(c) >= 2 and not c.isdisjoint(core)]
    if not candidates:
        return GsccResult(frozenset(), 0, "no SCC of size >= 2 intersects the core")
    top = candidates[0]
    if len(candidates) > 1 and len(candidates[1]) == len(top):
        raise ModelViolationError(
            f"GSCC not unique: {len(candidates)} SCCs intersect the core, "
            f"at least two of order {len(top)}"
        )
    internal = sum(1 for v in top for w in g.successors(v) if w in top)
    return GsccResult(top, internal)


def _reaching(g: Digraph, targets: frozenset[str]) -> set[str]:
    seen = set(targets)
    stack = list(targets)
    while stack:
        u = stack.pop()
        for w in g.predecessors(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


@dataclass(frozen=True)
class RoleAssignment:
    roles: Mapping[str, frozenset[Role]]
    sides: Mapping[str, Side]
    diagnostics: tuple[str, ...] = ()


def classify_roles(
    g: Digraph,
    profile: AccessibilityProfile,
    k: int,
    gscc: frozenset[str],
    *,
    strict: bool = True,
) -> RoleAssignment:
    """Assign degree-based roles and a side relative to the GSCC.

    ``profile`` may cover only the bank subgraph. When ``k >= N/2`` every bank
    with accessibility above ``k`` must reach the GSCC; a violation raises
    (``strict``) or is recorded as a diagnostic.
    """
    deg = degrees(g)
    roles: dict[str, frozenset[Role]] = {}
    for v in g.vertices:
        d = deg[v]
        r: set[Role] = set()
        if g.kind(v) is VertexKind.CUSTOMER:
            if d.in_total == 0:
                r.add(Role.SENDER)
            if d.out_total == 0:
                r.add(Role.RECEIVER)
        else:
            if d.in_from_customers > 0:
                r.add(Role.CORRESPONDENT_SENDER)
            if d.out_to_customers > 0:
                r.add(Role.CORRESPONDENT_RECEIVER)
            if d.in_from_banks * d.out_to_banks > 0:
                r.add(Role.INTERMEDIARY)
        if v in gscc:
            r.add(Role.GSCC_MEMBER)
        roles[v] = frozenset(r)

    upstream = _reaching(g, gscc) if gscc else set()
    sides = {}
    for v in g.vertices:
        if v in gscc:
            sides[v] = Side.GSCC
        elif v in upstream:
            sides[v] = Side.SENDER_SIDE
        else:
            sides[v] = Side.RECEIVER_SIDE

    notes: list[str] = []
    n = profile.order
    if gscc and 2 * k >= n:
        stray = sorted(v for v, a in profile.acc.items() if a > k and v not in upstream)
        if stray:
            msg = f"{len(stray)} vertices with acc > k={k} do not reach the GSCC: {stray[:5]}"
            if strict:
                raise ModelViolationError(msg)
            notes.append(msg)
    low_upstream = sorted(
        v for v, a in profile.acc.items() if 0 < a < k and sides.get(v) is Side.SENDER_SIDE
    )
    if low_upstream:
        notes.append(f"{len(low_upstream)} vertices with 0 < acc < k reach the GSCC: {low_upstream[:5]}")
    return RoleAssignment(roles, sides, tuple(notes))


def msd_threshold(k: int, n: int) -> Fraction:
    return 1 - Fraction(k + 1, n)


def macro_structure(msd_core: Fraction | float, k: int, n: int) -> MacroVerdict:
    if msd_core <= msd_threshold(k, n):
        return MacroVerdict.SINK_LIKE
    return MacroVerdict.BRIDGE_LIKE


@dataclass(frozen=True)
class StructureReport:
    n: int
    k: int
    core: frozenset[str]
    window: tuple[int, int]
    gscc: frozenset[str]
    gscc_edges: int
    mean_core: Fraction
    msd_core: Fraction
    msd_threshold: Fraction
    roles: Mapping[str, frozenset[Role]]
    sides: Mapping[str, Side]
    macro_verdict: MacroVerdict
    diagnostics: tuple[str, ...] = field(default=())

    @property
    def gscc_order(self) -> int:
        return len(self.gscc)

    def side_counts(self) -> dict[str, int]:
        counts = {s.value: 0 for s in Side}
        for v, s in self.sides.items():
            counts[s.value] += 1
        return counts


def analyze_structure(
    g: Digraph,
    config: DetectionConfig = DetectionConfig(),
    *,
    profile: AccessibilityProfile | None = None,
    strict: bool = True,
) -> StructureReport | None:
    """Run detection on the bank subgraph of ``g``; ``None`` if not k-accessible."""
    banks = g.bank_subgraph() if g.customers else g
    if profile is None:
        profile = accessibility_profile(banks)
    det = detect_k(profile, config)
    if not det.is_k_accessible:
        return None
    k = det.k
    gs = extract_gscc(banks, det.core)
    notes = [gs.diagnostic] if gs.diagnostic else []
    if gs.vertices and not gs.vertices <= det.core:
        notes.append("GSCC extends beyond the detected core")
    if gs.order > k + 1:
        notes.append(f"GSCC order {gs.order} exceeds k+1={k + 1}")
    assignment = classify_roles(g, profile, k, gs.vertices, strict=strict)
    notes.extend(assignment.diagnostics)
    msd = profile.msd(k, det.core)
    n = profile.order
    return StructureReport(
        n=n,
        k=k,
        core=det.core,
        window=det.window,
        gscc=gs.vertices,
        gscc_edges=gs.internal_edges,
        mean_core=profile.mean_over(det.core),
        msd_core=msd,
        msd_threshold=msd_threshold(k, n),
        roles=assignment.roles,
        sides=assignment.sides,
        macro_verdict=macro_structure(msd, k, n),
        diagnostics=tuple(notes),
    )
