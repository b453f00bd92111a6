"""Mod 2 Seiberg-Witten invariants of spin 4-manifolds from finite topological data."""

from __future__ import annotations

from .classcalc import EquivariantSegre, QuadForm, binom_mod2, euler_inverse_psi, segre_s2, segre_s2j
from .consum import connect, mk3_table, multiple_k3, sw_product_formula, verify_consistency
from .errors import ConsistencyError, InputError, ParseError, SWError
from .f2ring import BaseAlgebra, F2Element, Ring
from .families import FamilyData, constraint_check, families_sw, families_sw_pin2, point_family
from .swspin import (
    ManifoldData,
    Pin2Value,
    Verdict,
    compute_report,
    hyperelliptic,
    k3,
    kodaira_thurston,
    smoothability_obstruction,
    sw_basic,
    sw_pin2,
    torus4,
    twist_b2,
    twist_defect_b1,
    validate,
)

__all__ = [
    "BaseAlgebra", "ConsistencyError", "EquivariantSegre", "F2Element", "FamilyData", "InputError",
    "ManifoldData", "ParseError", "Pin2Value", "QuadForm", "Ring", "SWError", "Verdict",
    "binom_mod2", "compute_report", "connect", "constraint_check", "euler_inverse_psi",
    "families_sw", "families_sw_pin2", "hyperelliptic", "k3", "kodaira_thurston", "mk3_table",
    "multiple_k3", "point_family", "segre_s2", "segre_s2j", "smoothability_obstruction",
    "sw_basic", "sw_pin2", "sw_product_formula", "torus4", "twist_b2", "twist_defect_b1",
    "validate", "verify_consistency",
]
