"""Structural analysis of correspondent-banking payment networks."""

from __future__ import annotations

from .accessibility import DetectionConfig, analyze_structure, detect_k
from .bounds import circumference, circumference_bounds, diameter_bound
from .constructions import construct_mka, construct_mpc, mstar, oracle_min_pclan, solve_model1
from .errors import (
    CapacityError,
    CbnetError,
    InvariantError,
    ModelViolationError,
    PreconditionError,
    StructuralInputError,
)
from .generator import GeneratorConfig, generate
from .graph_core import INFINITE, Digraph, accessibility_profile, build_digraph, diameter, tarjan_scc
from .reduction import check_removal, greedy_max_removal

__all__ = [
    "INFINITE",
    "CapacityError",
    "CbnetError",
    "DetectionConfig",
    "Digraph",
    "GeneratorConfig",
    "InvariantError",
    "ModelViolationError",
    "PreconditionError",
    "StructuralInputError",
    "accessibility_profile",
    "analyze_structure",
    "build_digraph",
    "check_removal",
    "circumference",
    "circumference_bounds",
    "construct_mka",
    "construct_mpc",
    "detect_k",
    "diameter",
    "diameter_bound",
    "generate",
    "greedy_max_removal",
    "mstar",
    "oracle_min_pclan",
    "solve_model1",
    "tarjan_scc",
]
