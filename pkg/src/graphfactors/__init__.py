"""Tutte conditions, H-factors and H-criticality for general graphs."""

from __future__ import annotations

from .critical import CriticalityReport, h_pendant, is_h_critical
from .degrees import (
    DegreeSet,
    FSpec,
    HAssignment,
    Infeasible,
    Provenance,
    SetClass,
    classify,
    colored_h,
    family_member,
    h_family,
    j_plus_set,
    j_set,
    jf_assignment,
    jf_plus_assignment,
    truncate,
)
from .errors import (
    CapExceeded,
    GraphFactorError,
    GuardError,
    ParseError,
)
from .factor import (
    FactorCertificate,
    GadgetGraph,
    brute_force_h_factor,
    build_gadget,
    decode_matching,
    find_h_factor,
    solve_h_factor,
    verify_factor,
)
from .graph import (
    Multigraph,
    add_pendant,
    components,
    emit_dot,
    odd_components,
    parse_edge_list,
    parse_graph6,
    to_graph6,
)
from .matching import Matching, brute_force_max_matching, has_perfect_matching, max_matching
from .sweep import SweepConfig, SweepReport, run_sweep
from .theorems import (
    CheckSettings,
    TheoremId,
    TheoremVerdict,
    check_ck,
    check_colored_even,
    check_colored_general,
    check_eky,
    check_main_even,
    check_main_odd,
    enumerate_connected_graphs,
    sample_multigraphs,
)
from .tutte import (
    TutteVerdict,
    TutteViolation,
    check_tutte,
    necessity_fprime,
    sufficiency_h,
    worst_deficiency,
)

__all__ = [name for name in dir() if not name.startswith("_") and name != "annotations"]
