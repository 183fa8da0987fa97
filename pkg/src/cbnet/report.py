"""Turn analysis results into plain report sections, and the full pipeline."""

from __future__ import annotations

from typing import Any

from .accessibility import DetectionConfig, StructureReport, analyze_structure, detect_k
from .bounds import BoundReport, diameter_bound
from .constructions import ORACLE_MAX_N, ConstructionResult, MStarResult, mstar
from .graph_core import (
    AccessibilityProfile,
    Digraph,
    accessibility_profile,
    assortativity,
    diameter,
    tarjan_scc,
)
from .reduction import RemovalVerdict


def graph_section(g: Digraph) -> dict[str, Any]:
    return {
        "order": g.order,
        "size": g.size,
        "banks": len(g.banks),
        "customers": len(g.customers),
        "assortativity": assortativity(g),
    }


def profile_section(profile: AccessibilityProfile, k: int | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "order": profile.order,
        "mean_acc": profile.mean,
        "max_acc": max(profile.acc.values(), default=0),
        "max_ecc": profile.max_eccentricity,
        "histogram": {str(a): c for a, c in sorted(profile.histogram.items())},
    }
    if k is not None:
        out["k"] = k
        out["msd"] = profile.msd(k)
    return out


def structure_section(rep: StructureReport) -> dict[str, Any]:
    return {
        "n": rep.n,
        "k": rep.k,
        "core_size": len(rep.core),
        "window": list(rep.window),
        "gscc_order": rep.gscc_order,
        "gscc_edges": rep.gscc_edges,
        "mean_core": rep.mean_core,
        "msd_core": rep.msd_core,
        "msd_threshold": rep.msd_threshold,
        "macro_verdict": rep.macro_verdict,
        "sides": rep.side_counts(),
        "diagnostics": list(rep.diagnostics) or None,
    }


def bound_section(rep: BoundReport) -> dict[str, Any]:
    out = {
        "original_order": rep.original_order,
        "contracted_order": rep.contracted_order,
        "omega_size": rep.omega_size,
        "n_prime": rep.n_prime,
        "delta": rep.delta,
        "dankelmann_bound": rep.dankelmann_bound,
        "knyazev_bound": rep.knyazev_bound,
        "applicable": rep.applicable,
        "reason": rep.reason,
        "checksum_ok": rep.checksum_ok,
        "measured_diameter": rep.measured_diameter,
        "contracted_diameter": rep.contracted_diameter,
        "extension_diameter": rep.extension_diameter,
        "diagnostics": list(rep.diagnostics) or None,
    }
    if rep.circumference_interval is not None:
        lo, hi = rep.circumference_interval
        out["circumference_interval"] = [lo, hi]
    return out


def mstar_section(res: MStarResult) -> dict[str, Any]:
    return {
        "n": res.n,
        "p": res.p,
        "formula_value": res.formula_value,
        "branch": res.branch,
        "oracle_value": res.oracle_value,
        "agreement": res.agreement,
    }


def removal_section(v: RemovalVerdict) -> dict[str, Any]:
    return {
        "removed": v.removed,
        "feasible": v.feasible,
        "still_strongly_connected": v.still_strongly_connected,
        "diameter_before": v.diameter_before,
        "diameter_after": v.diameter_after,
        "order_after": v.order_after,
        "edge_count_after": v.edge_count_after,
        "mstar": mstar_section(v.mstar_threshold) if v.mstar_threshold else None,
        "meets_edge_threshold": v.meets_edge_threshold,
        "impacted": v.impacted or None,
    }


def construction_section(res: ConstructionResult) -> dict[str, Any]:
    c = res.certified
    return {
        "family": res.family,
        "params": dict(res.params),
        "order": res.graph.order,
        "edge_count": c.edge_count,
        "claimed_edges": res.claimed_edges,
        "scc_orders": list(c.scc_orders),
        "diameter": c.diameter,
        "mean_acc": c.mean_acc,
        "msd": c.msd_from_k,
        "note": res.note,
    }


def scc_section(g: Digraph) -> dict[str, Any]:
    comps = tarjan_scc(g)
    nontrivial = [c for c in comps if len(c) > 1]
    return {
        "count": len(comps),
        "nontrivial": len(nontrivial),
        "orders": [len(c) for c in nontrivial],
    }


def analyze(
    g: Digraph,
    config: DetectionConfig = DetectionConfig(),
    *,
    strict: bool = False,
) -> dict[str, Any]:
    """Run every analysis that applies to ``g`` and collect report sections."""
    banks = g.bank_subgraph() if g.customers else g
    profile = accessibility_profile(banks)
    structure = analyze_structure(g, config, profile=profile, strict=strict)
    k = structure.k if structure else None
    sections: dict[str, Any] = {
        "graph": graph_section(g),
        "profile": profile_section(profile, k),
        "scc": scc_section(banks),
        "structure": structure_section(structure) if structure else None,
    }
    if structure is None:
        sections["detection"] = {"k_accessible": False}
    core = structure.gscc if structure and structure.gscc_order >= 2 else None
    if core is None:
        largest = tarjan_scc(banks)
        core = largest[0] if largest and len(largest[0]) >= 2 else None
    if core is not None:
        sub = banks.induced(core)
        p = diameter(sub)
        sections["bounds"] = bound_section(diameter_bound(sub, p=p))
        if sub.order >= 3:
            sections["mstar"] = mstar_section(
                mstar(sub.order, min(p, sub.order - 1), oracle=sub.order <= ORACLE_MAX_N)
            )
    return sections


def accessibility_sections(g: Digraph, config: DetectionConfig = DetectionConfig()) -> dict[str, Any]:
    banks = g.bank_subgraph() if g.customers else g
    profile = accessibility_profile(banks)
    det = detect_k(profile, config)
    return {
        "profile": profile_section(profile, det.k),
        "detection": {
            "k_accessible": det.is_k_accessible,
            "k": det.k,
            "core_size": len(det.core) if det.is_k_accessible else None,
            "window": list(det.window) if det.window else None,
        },
    }
