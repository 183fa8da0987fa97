"""What-if removal of banks from the giant SCC.

A removal is feasible when the remaining GSCC is still strongly connected and
its diameter did not grow. The edge-count screen against m*(N, p) is reported
alongside but does not veto a removal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .constructions import ORACLE_MAX_N, MStarResult, mstar
from .errors import PreconditionError
from .graph_core import Digraph, diameter, is_infinite, is_strongly_connected

MIN_SURVIVING_ORDER = 2


@dataclass(frozen=True)
class RemovalVerdict:
    removed: frozenset[str]
    still_strongly_connected: bool
    diameter_before: int
    diameter_after: object  # int or INFINITE
    order_after: int
    edge_count_after: int
    mstar_threshold: MStarResult | None
    impacted: frozenset[str] = frozenset()

    @property
    def meets_edge_threshold(self) -> bool | None:
        """``None`` when too few vertices survive for m* to be defined."""
        if self.mstar_threshold is None:
            return None
        return self.edge_count_after >= self.mstar_threshold.best_known

    @property
    def feasible(self) -> bool:
        return (
            self.still_strongly_connected
            and not is_infinite(self.diameter_after)
            and self.diameter_after <= self.diameter_before
        )


def _threshold(n_after: int, p_before: int) -> MStarResult | None:
    if n_after < 3:
        return None
    p = max(1, min(p_before, n_after - 1))
    return mstar(n_after, p, oracle=n_after <= ORACLE_MAX_N)


def check_removal(g: Digraph, gscc: Iterable[str], candidates: Iterable[str]) -> RemovalVerdict:
    """Evaluate removing ``candidates`` from the SCC ``gscc`` of ``g``.

    Everything is recomputed from the induced subgraphs; nothing incremental.
    """
    core = frozenset(gscc)
    drop = frozenset(candidates)
    outside = drop - core
    if outside:
        raise PreconditionError(f"candidates outside the GSCC: {sorted(outside)[:5]}")
    if drop == core:
        raise PreconditionError("cannot remove the whole GSCC")
    before = g.induced(core)
    if not is_strongly_connected(before):
        raise PreconditionError("gscc does not induce a strongly connected subgraph")
    after = before.without(drop)
    d_before = diameter(before)
    connected = is_strongly_connected(after)
    d_after = diameter(after)
    impacted = frozenset(
        w for v in drop for w in (*g.successors(v), *g.predecessors(v)) if w not in core
    )
    return RemovalVerdict(
        removed=drop,
        still_strongly_connected=connected,
        diameter_before=d_before,
        diameter_after=d_after,
        order_after=after.order,
        edge_count_after=after.size,
        mstar_threshold=_threshold(after.order, d_before),
        impacted=impacted,
    )


def greedy_max_removal(
    g: Digraph,
    gscc: Iterable[str],
    cost: Mapping[str, float] | None = None,
) -> tuple[frozenset[str], RemovalVerdict]:
    """Remove feasible vertices one at a time, most costly first.

    Without ``cost`` every vertex weighs the same and ties fall to the
    smallest id. Stops when no single further removal is feasible or only
    two vertices would remain. The result is maximal, not maximum.
    """
    core = frozenset(gscc)
    if len(core) < 3:
        raise PreconditionError("greedy removal needs a GSCC of order >= 3")
    weight = dict(cost or {})
    if any(w < 0 for w in weight.values()):
        raise PreconditionError("costs must be non-negative")
    removed: frozenset[str] = frozenset()
    verdict = check_removal(g, core, removed)
    while len(core) - len(removed) > MIN_SURVIVING_ORDER:
        ranked = sorted(core - removed, key=lambda v: (-weight.get(v, 0.0), v))
        for v in ranked:
            trial = check_removal(g, core, removed | {v})
            if trial.feasible:
                removed, verdict = trial.removed, trial
                break
        else:
            break
    return removed, verdict
