"""
Boolean Petri nets of a given type, the firing rule and reachability graphs.
"""

from collections import deque
from typing import Dict, List, Mapping, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .core import Interaction, NetType, TransitionSystem, interaction_apply
from .errors import ReachabilityCapExceeded, UnknownTransitionError
from .utils import get_logger

logger = get_logger(__name__)

DEFAULT_CAP = 2 ** 20

Marking = Mapping[str, int]


# ============================================================================
# Pydantic Models
# ============================================================================

class BooleanNet(BaseModel):
    """A τ-net N = (P, T, H0, f); flows omitted from ``flow`` are nop."""

    model_config = ConfigDict(frozen=True)

    name: str = "N"
    net_type: NetType
    places: Tuple[str, ...] = ()
    transitions: Tuple[str, ...] = ()
    initial_marking: Dict[str, int] = Field(default_factory=dict, description="H0: place -> 0/1")
    flow: Dict[str, Dict[str, Interaction]] = Field(default_factory=dict, description="place -> transition -> f(p,t)")

    @model_validator(mode="after")
    def _well_formed(self) -> "BooleanNet":
        places = set(self.places)
        transitions = set(self.transitions)
        shared = places & transitions
        if shared:
            raise ValueError(f"places and transitions overlap: {sorted(shared)}")
        if set(self.initial_marking) != places:
            raise ValueError("initial marking must assign exactly the net's places")
        for place, bit in self.initial_marking.items():
            if bit not in (0, 1):
                raise ValueError(f"initial marking of '{place}' must be 0 or 1")
        for place, row in self.flow.items():
            if place not in places:
                raise ValueError(f"flow names unknown place '{place}'")
            for transition, interaction in row.items():
                if transition not in transitions:
                    raise ValueError(f"flow names unknown transition '{transition}'")
                if interaction not in self.net_type:
                    raise ValueError(f"f({place},{transition})={interaction} is not in type {self.net_type}")
        if Interaction.NOP not in self.net_type:
            for place in self.places:
                missing = [t for t in self.transitions if t not in self.flow.get(place, {})]
                if missing:
                    raise ValueError(f"type {self.net_type} lacks nop, so f({place},{missing[0]}) must be given")
        return self

    def flow_of(self, place: str, transition: str) -> Interaction:
        return self.flow.get(place, {}).get(transition, Interaction.NOP)


class ReachabilityGraph(BaseModel):
    """The reachability graph A_N with the marking behind every state."""

    model_config = ConfigDict(frozen=True)

    ts: TransitionSystem
    markings: Dict[str, Dict[str, int]]


# ============================================================================
# Firing
# ============================================================================

def fire(net: BooleanNet, marking: Marking, transition: str) -> Optional[Dict[str, int]]:
    """Fire ``transition`` in ``marking``; ``None`` when it is not enabled."""
    if transition not in net.transitions:
        raise UnknownTransitionError(f"unknown transition '{transition}'")
    result: Dict[str, int] = {}
    for place in net.places:
        if place not in marking:
            raise ValueError(f"marking does not assign place '{place}'")
        value = interaction_apply(net.flow_of(place, transition), marking[place])
        if value is None:
            return None
        result[place] = value
    return result


def reachability_graph(net: BooleanNet, cap: int = DEFAULT_CAP) -> ReachabilityGraph:
    """Breadth-first closure of ``fire`` from H0; states are named m0, m1, ... in discovery order."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    places = sorted(net.places)
    transitions = sorted(net.transitions)
    effects: Dict[str, List[Tuple[int, Interaction]]] = {
        t: [(idx, net.flow_of(p, t)) for idx, p in enumerate(places) if net.flow_of(p, t) != Interaction.NOP]
        for t in transitions
    }

    start = tuple(net.initial_marking[p] for p in places)
    names: Dict[Tuple[int, ...], str] = {start: "m0"}
    queue = deque([start])
    arcs: List[Tuple[str, str, str]] = []
    while queue:
        current = queue.popleft()
        for t in transitions:
            successor = list(current)
            for idx, interaction in effects[t]:
                value = interaction_apply(interaction, current[idx])
                if value is None:
                    break
                successor[idx] = value
            else:
                key = tuple(successor)
                if key not in names:
                    if len(names) >= cap:
                        raise ReachabilityCapExceeded(cap, len(names) + 1)
                    names[key] = f"m{len(names)}"
                    queue.append(key)
                arcs.append((names[current], t, names[key]))

    ordered = sorted(names.items(), key=lambda item: int(item[1][1:]))
    ts = TransitionSystem(
        name=f"rg_{net.name}",
        states=tuple(name for _, name in ordered),
        events=tuple(net.transitions),
        arcs=tuple(arcs),
        initial="m0",
    )
    markings = {name: dict(zip(places, key)) for key, name in ordered}
    logger.debug(f"Reachability graph of {net.name}: {len(names)} markings, {len(arcs)} arcs")
    return ReachabilityGraph(ts=ts, markings=markings)


# ============================================================================
# Isomorphism
# ============================================================================

def ts_isomorphic(a: TransitionSystem, b: TransitionSystem) -> Optional[Dict[str, str]]:
    """The label-preserving bijection S_a -> S_b with ι_a -> ι_b, if one exists.

    Both systems are deterministic and reachable, so the bijection is forced
    along a breadth-first walk from the initial states.
    """
    a.require_valid()
    b.require_valid()
    if len(a.states) != len(b.states) or len(a.arcs) != len(b.arcs):
        return None

    forward = {a.initial: b.initial}
    backward = {b.initial: a.initial}
    queue = deque([a.initial])
    while queue:
        state = queue.popleft()
        image = forward[state]
        out_a = dict(a.out_arcs(state))
        out_b = dict(b.out_arcs(image))
        if out_a.keys() != out_b.keys():
            return None
        for event, dst in out_a.items():
            dst_b = out_b[event]
            if dst in forward:
                if forward[dst] != dst_b:
                    return None
                continue
            if dst_b in backward:
                return None
            forward[dst] = dst_b
            backward[dst_b] = dst
            queue.append(dst)
    return forward if len(forward) == len(a.states) else None
