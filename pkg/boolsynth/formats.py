"""
Line-oriented file formats for transition systems, nets and instances, and
DOT rendering.

TS files::

    ts a1
    initial s0
    arc s0 a s1
    state lonely      # only needed for states on no arc
    event unused      # only needed for events on no arc

Net files::

    net n_a1
    type nop,set,swap,free
    place p0 1
    transition a
    flow p0 a free    # omitted flows are nop

Instance files hold one clause per line as three variable indices.
"""

from typing import Dict, List, Mapping, Optional, Tuple

import pydot

from .core import Interaction, NetType, TransitionSystem
from .errors import FormatError, InvalidInstanceError
from .reductions.instances import OneInThreeInstance, validate_instance
from .semantics import BooleanNet


def _lines(text: str) -> List[Tuple[int, List[str]]]:
    """Non-empty lines with comments stripped, as (1-based number, tokens)."""
    result = []
    for number, line in enumerate(text.splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()
        if tokens:
            result.append((number, tokens))
    return result


def _expect(number: int, tokens: List[str], arity: int) -> None:
    if len(tokens) != arity + 1:
        raise FormatError(number, f"'{tokens[0]}' takes {arity} argument(s), got {len(tokens) - 1}")


# ============================================================================
# Transition systems
# ============================================================================

def parse_ts(text: str) -> TransitionSystem:
    """Parse a TS file; the result is validated before it is returned.

    Raises:
        FormatError: malformed line or missing ``initial``
        InvalidTransitionSystemError: determinism or reachability violated
    """
    name = "A"
    initial: Optional[str] = None
    states: List[str] = []
    events: List[str] = []
    arcs: List[Tuple[str, str, str]] = []
    last = 0
    for number, tokens in _lines(text):
        last = number
        keyword = tokens[0]
        if keyword == "ts":
            _expect(number, tokens, 1)
            name = tokens[1]
        elif keyword == "initial":
            _expect(number, tokens, 1)
            if initial is not None:
                raise FormatError(number, "initial state declared twice")
            initial = tokens[1]
        elif keyword == "state":
            _expect(number, tokens, 1)
            states.append(tokens[1])
        elif keyword == "event":
            _expect(number, tokens, 1)
            events.append(tokens[1])
        elif keyword == "arc":
            _expect(number, tokens, 3)
            arcs.append((tokens[1], tokens[2], tokens[3]))
        else:
            raise FormatError(number, f"unknown keyword '{keyword}'")
    if initial is None:
        raise FormatError(last + 1, "missing 'initial' line")
    ts = TransitionSystem.from_arcs(initial, arcs, name=name, states=states, events=events)
    return ts.require_valid()


def emit_ts(ts: TransitionSystem) -> str:
    on_arcs = {s for src, _, dst in ts.arcs for s in (src, dst)}
    used = {event for _, event, _ in ts.arcs}
    lines = [f"ts {ts.name}", f"initial {ts.initial}"]
    lines += [f"state {s}" for s in ts.states if s not in on_arcs and s != ts.initial]
    lines += [f"event {e}" for e in ts.events if e not in used]
    lines += [f"arc {src} {event} {dst}" for src, event, dst in ts.arcs]
    return "\n".join(lines) + "\n"


# ============================================================================
# Nets
# ============================================================================

def parse_net(text: str) -> BooleanNet:
    name = "N"
    net_type: Optional[NetType] = None
    marking: Dict[str, int] = {}
    transitions: List[str] = []
    flow: Dict[str, Dict[str, Interaction]] = {}
    last = 0
    for number, tokens in _lines(text):
        last = number
        keyword = tokens[0]
        if keyword == "net":
            _expect(number, tokens, 1)
            name = tokens[1]
        elif keyword == "type":
            _expect(number, tokens, 1)
            try:
                net_type = NetType.parse(tokens[1])
            except ValueError as e:
                raise FormatError(number, str(e)) from None
        elif keyword == "place":
            _expect(number, tokens, 2)
            if tokens[2] not in ("0", "1"):
                raise FormatError(number, f"marking of '{tokens[1]}' must be 0 or 1")
            marking[tokens[1]] = int(tokens[2])
        elif keyword == "transition":
            _expect(number, tokens, 1)
            transitions.append(tokens[1])
        elif keyword == "flow":
            _expect(number, tokens, 3)
            try:
                interaction = Interaction(tokens[3])
            except ValueError:
                raise FormatError(number, f"unknown interaction '{tokens[3]}'") from None
            flow.setdefault(tokens[1], {})[tokens[2]] = interaction
        else:
            raise FormatError(number, f"unknown keyword '{keyword}'")
    if net_type is None:
        raise FormatError(last + 1, "missing 'type' line")
    return BooleanNet(name=name, net_type=net_type, places=tuple(marking), transitions=tuple(transitions),
                      initial_marking=marking, flow=flow)


def emit_net(net: BooleanNet) -> str:
    keep_nop = Interaction.NOP in net.net_type
    lines = [f"net {net.name}", f"type {net.net_type.spec()}"]
    lines += [f"place {p} {net.initial_marking[p]}" for p in net.places]
    lines += [f"transition {t}" for t in net.transitions]
    for p in net.places:
        for t in net.transitions:
            interaction = net.flow_of(p, t)
            if keep_nop and interaction == Interaction.NOP:
                continue
            lines.append(f"flow {p} {t} {interaction}")
    return "\n".join(lines) + "\n"


# ============================================================================
# Instances
# ============================================================================

def parse_instance(text: str) -> OneInThreeInstance:
    """One clause per line; validity errors are reported on the clause's line."""
    clauses: List[List[int]] = []
    line_of: List[int] = []
    for number, tokens in _lines(text):
        if len(tokens) != 3:
            raise FormatError(number, f"a clause has three variables, got {len(tokens)}")
        try:
            clauses.append([int(token) for token in tokens])
        except ValueError:
            raise FormatError(number, f"variable indices must be integers: {' '.join(tokens)}") from None
        line_of.append(number)
    try:
        return validate_instance(clauses)
    except InvalidInstanceError as e:
        line = line_of[e.clause] if e.clause is not None else (line_of[-1] if line_of else 1)
        raise FormatError(line, str(e)) from None


def emit_instance(phi: OneInThreeInstance) -> str:
    return "".join(f"{a} {b} {c}\n" for a, b, c in phi.clauses)


# ============================================================================
# DOT
# ============================================================================

def to_dot(ts: TransitionSystem, labels: Optional[Mapping[str, str]] = None) -> str:
    """Render ``ts`` as a DOT digraph; the initial state hangs off an invisible start node."""
    graph = pydot.Dot(ts.name, graph_type="digraph", rankdir="LR")
    graph.add_node(pydot.Node("__start", style="invis", shape="point"))
    for state in ts.states:
        label = labels.get(state, state) if labels else state
        shape = "doublecircle" if state == ts.initial else "circle"
        graph.add_node(pydot.Node(f'"{state}"', label=f'"{label}"', shape=shape))
    graph.add_edge(pydot.Edge("__start", f'"{ts.initial}"'))
    for src, event, dst in ts.arcs:
        graph.add_edge(pydot.Edge(f'"{src}"', f'"{dst}"', label=f'"{event}"'))
    return graph.to_string()


def marking_labels(markings: Mapping[str, Mapping[str, int]]) -> Dict[str, str]:
    """``m3`` -> ``m3 [p0=1 p1=0]`` for reachability-graph rendering."""
    return {state: f"{state} [" + " ".join(f"{p}={b}" for p, b in sorted(marking.items())) + "]"
            for state, marking in markings.items()}
