"""boolsynth: synthesis of Boolean Petri nets from transition systems."""

from .core import (
    FLIP,
    IDENTITY,
    ComplexityClass,
    Interaction,
    NetType,
    Region,
    TransitionSystem,
    classify_complexity,
    compute_bound,
    transport,
    transport_region,
    validate_ts,
)
from .errors import BoolSynthError
from .polytime import decide_one_bounded, decide_small_g
from .regions import (
    Verdict,
    decide_solvable,
    enumerate_atoms,
    separation_report,
    solve_atom,
    synthesize,
)
from .semantics import BooleanNet, fire, reachability_graph, ts_isomorphic

__version__ = "0.1.0"

__all__ = [
    "FLIP",
    "IDENTITY",
    "BoolSynthError",
    "BooleanNet",
    "ComplexityClass",
    "Interaction",
    "NetType",
    "Region",
    "TransitionSystem",
    "Verdict",
    "classify_complexity",
    "compute_bound",
    "decide_one_bounded",
    "decide_small_g",
    "decide_solvable",
    "enumerate_atoms",
    "fire",
    "reachability_graph",
    "separation_report",
    "solve_atom",
    "synthesize",
    "transport",
    "transport_region",
    "ts_isomorphic",
    "validate_ts",
]
