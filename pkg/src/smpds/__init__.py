"""Reachability analysis for self-modifying pushdown systems.

A self-modifying pushdown system is an ordinary pushdown system extended
with rule-change rules that add and remove pushdown rules from the
currently active set (the phase).  This package provides:

 - the core model with an executable small-step semantics (`model`),
 - phase-annotated configuration automata (`automaton`),
 - direct backward and forward saturation (`prestar`, `poststar`),
 - translations to ordinary and symbolic pushdown systems with classical
   saturation as cross-checks (`translate`),
 - a toy self-modifying assembly front end (`asm`),
 - random-instance benchmarking (`bench`) and a command-line interface
   (`cli`, installed as the `smpds` script).
"""

from .model import (
    Configuration,
    EMPTY_PHASE,
    PdsRule,
    Phase,
    ReachResult,
    RuleId,
    SelfModRule,
    SMPDS,
    ValidationReport,
    bounded_reach,
    check_configuration,
    normalize_push,
    normalize_selfmod,
    step,
    validate,
)
from .automaton import EPS, Generated, Initial, PAutomaton, Plain, from_configs
from .prestar import SaturationStats, prestar, solve_predecessor_phases
from .poststar import poststar
from .translate import (
    PDS,
    SymbolicPDS,
    config_to_pds,
    pds_accepts,
    pds_from_configs,
    pds_prestar,
    pds_poststar,
    pds_step,
    phase_closure,
    symbolic_step,
    to_pds,
    to_symbolic_pds,
)

__all__ = [
    "Configuration", "EMPTY_PHASE", "EPS", "Generated", "Initial",
    "PAutomaton", "PDS", "PdsRule", "Phase", "Plain", "ReachResult",
    "RuleId", "SMPDS", "SaturationStats", "SelfModRule", "SymbolicPDS",
    "ValidationReport", "bounded_reach", "config_to_pds", "from_configs",
    "normalize_push", "normalize_selfmod", "pds_accepts",
    "pds_from_configs", "pds_poststar", "pds_prestar", "pds_step",
    "phase_closure", "poststar", "prestar", "solve_predecessor_phases",
    "step", "symbolic_step", "to_pds", "to_symbolic_pds", "validate",
    "check_configuration",
]

__version__ = "0.1.0"
