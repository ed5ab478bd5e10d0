"""
Polynomial-time deciders for bounded inputs.

``decide_one_bounded`` handles 1-bounded inputs (simple paths and directed
cycles) for the types whose 1-bounded synthesis is tractable: every atom is
tried against a short, fixed family of candidate regions built on the cycle
form of the input. ``decide_small_g`` covers the four small-bound
characterizations: single loops and event-distinct paths, loop ladders,
tiny swap systems and the always-polynomial types.
"""

from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from .core import (
    FLIP,
    Arc,
    Interaction,
    NetType,
    Region,
    TransitionSystem,
    complexity_row,
    compute_bound,
    interaction_apply,
    transport,
    transport_region,
)
from .errors import BoolSynthError, UnsupportedInputError
from .regions import (
    EventStateSeparationAtom,
    SeparationAtom,
    SolveStatus,
    StateSeparationAtom,
    Verdict,
    all_regions,
    decide_solvable,
    enumerate_atoms,
    extend_region,
    region_solves,
    region_valid,
    solve_atom,
)
from .utils import get_logger

logger = get_logger(__name__)

NOP, INP, OUT, SET, RES, SWAP, USED, FREE = (
    Interaction.NOP, Interaction.INP, Interaction.OUT, Interaction.SET,
    Interaction.RES, Interaction.SWAP, Interaction.USED, Interaction.FREE,
)

Candidate = Tuple[str, int, Dict[str, Interaction]]


# ============================================================================
# Pydantic Models
# ============================================================================

class ShapeKind(str, Enum):
    SIMPLE_PATH = "simple-path"
    DIRECTED_CYCLE = "directed-cycle"
    NEITHER = "neither"


class LinearShape(BaseModel):
    """A 1-bounded system read off as s0 -e1-> s1 ... -em-> sm."""

    classification: ShapeKind
    states: List[str] = Field(..., description="s0..sm; a cycle does not repeat s0 at the end")
    events: List[str] = Field(..., description="e1..em in walk order")
    repeated_event: Optional[str] = None
    repeat_atom: Optional[StateSeparationAtom] = Field(
        None, description="SSP atom (s', s'') behind the first event occurring twice in a row")

    def arc_list(self) -> List[Arc]:
        n = len(self.states)
        arcs = []
        for t, event in enumerate(self.events):
            dst = self.states[(t + 1) % n] if self.classification == ShapeKind.DIRECTED_CYCLE \
                else self.states[t + 1]
            arcs.append((self.states[t], event, dst))
        return arcs

    def k_partition(self, k: str) -> List[List[Arc]]:
        """The subsequences I_0, I_1, ... of arcs between consecutive occurrences of ``k``."""
        arcs = self.arc_list()
        positions = [t for t, event in enumerate(self.events) if event == k]
        if not positions:
            return [arcs]
        if self.classification == ShapeKind.DIRECTED_CYCLE:
            segments = []
            for n, start in enumerate(positions):
                stop = positions[(n + 1) % len(positions)]
                span = (stop - start - 1) % len(arcs)
                segments.append([arcs[(start + 1 + d) % len(arcs)] for d in range(span)])
            return segments
        bounds = [-1] + positions + [len(arcs)]
        return [arcs[a + 1:b] for a, b in zip(bounds, bounds[1:])]


class PolytimeDecision(BaseModel):
    verdict: Verdict
    regions: List[Region] = Field(default_factory=list, description="Witness regions when solvable")
    atom: Optional[SeparationAtom] = Field(None, description="An unsolvable atom when unsolvable")
    condition: Optional[int] = Field(None, description="Small-bound condition that applied")

    @property
    def solvable(self) -> bool:
        return self.verdict == Verdict.SOLVABLE


# ============================================================================
# Shapes
# ============================================================================

def classify_linear(ts: TransitionSystem) -> LinearShape:
    """Read a 1-bounded system as a simple path or a directed cycle."""
    if compute_bound(ts) > 1:
        raise UnsupportedInputError(f"{ts.name} is not 1-bounded")
    states = [ts.initial]
    events: List[str] = []
    closed = False
    current = ts.initial
    while ts.out_arcs(current):
        event, dst = ts.out_arcs(current)[0]
        events.append(event)
        if dst == ts.initial:
            closed = True
            break
        states.append(dst)
        current = dst

    if len(events) != len(ts.arcs) or len(states) != len(ts.states):
        kind = ShapeKind.NEITHER
    elif closed:
        kind = ShapeKind.DIRECTED_CYCLE
    else:
        kind = ShapeKind.SIMPLE_PATH

    repeated, atom = None, None
    n = len(events)
    if kind == ShapeKind.DIRECTED_CYCLE and n >= 2:
        for t in range(n):
            if events[t] == events[(t + 1) % n]:
                repeated = events[t]
                atom = StateSeparationAtom(state=states[(t + 1) % n], other=states[(t + 2) % n])
                break
    elif kind == ShapeKind.SIMPLE_PATH:
        for t in range(n - 1):
            if events[t] == events[t + 1]:
                repeated = events[t]
                atom = StateSeparationAtom(state=states[t + 1], other=states[t + 2])
                break
    return LinearShape(classification=kind, states=states, events=events,
                       repeated_event=repeated, repeat_atom=atom)


def _fresh_event(ts: TransitionSystem) -> str:
    name = "oplus"
    while name in ts.events:
        name += "_"
    return name


def cycle_extension(ts: TransitionSystem) -> TransitionSystem:
    """Close a simple path s0 ... sm into a cycle with a fresh event sm -> s0."""
    shape = classify_linear(ts)
    if shape.classification != ShapeKind.SIMPLE_PATH:
        raise UnsupportedInputError(f"{ts.name} is not a simple path")
    fresh = _fresh_event(ts)
    return TransitionSystem(
        name=f"{ts.name}_c",
        states=ts.states,
        events=(*ts.events, fresh),
        arcs=(*ts.arcs, (shape.states[-1], fresh, ts.initial)),
        initial=ts.initial,
    )


def loop_erasement(ts: TransitionSystem) -> TransitionSystem:
    return TransitionSystem(
        name=f"{ts.name}_erased",
        states=ts.states,
        events=ts.events,
        arcs=tuple(a for a in ts.arcs if a[0] != a[2]),
        initial=ts.initial,
    )


# ============================================================================
# Cycle decider
# ============================================================================

def _names(*names: str) -> frozenset:
    return frozenset(Interaction(n) for n in names)


ONE_BOUNDED_BASES = [_names("nop", "inp", "set"), _names("nop", "inp", "set", "used")]
ONE_BOUNDED_FLIPPED = [_names("nop", "out", "res"), _names("nop", "out", "res", "free")]


def _one_bounded_supported(tau: NetType) -> bool:
    members = tau.members
    if members in ONE_BOUNDED_BASES or members in ONE_BOUNDED_FLIPPED:
        return True
    omega = members - _names("nop", "set", "res")
    return _names("nop", "set", "res") <= members and bool(omega) and omega <= _names("inp", "out", "used", "free")


def _flip_candidate(candidate: Candidate) -> Candidate:
    start, sup_init, sig = candidate
    return start, 1 - sup_init, {e: FLIP.map_interaction(i) for e, i in sig.items()}


class _CycleDecider:
    """Candidate-region search on a directed cycle for one oriented type."""

    def __init__(self, cycle: TransitionSystem, shape: LinearShape, tau: NetType):
        self.cycle = cycle
        self.tau = tau
        self.states = shape.states
        self.events = shape.events
        self.size = len(shape.events)
        self.position = {s: t for t, s in enumerate(self.states)}
        self.occurrences: Dict[str, List[int]] = {}
        for t, event in enumerate(self.events):
            self.occurrences.setdefault(event, []).append(t)
        self.inp_family = SET in tau and RES not in tau
        self._rotations: Dict[str, TransitionSystem] = {}

    def _rotated(self, start: str) -> TransitionSystem:
        if start not in self._rotations:
            self._rotations[start] = self.cycle.with_initial(start)
        return self._rotations[start]

    def _signature(self, default: Interaction, overrides: Dict[str, Interaction]) -> Dict[str, Interaction]:
        sig = {e: default for e in self.cycle.events}
        sig.update(overrides)
        return sig

    # ------------------------------------------------------------------
    # candidates
    # ------------------------------------------------------------------

    def _essp_attempts(self) -> List[Tuple[Interaction, Interaction, int, bool, bool]]:
        # (signature of k, signature of the scanned event, least ℓ, distinct-event case, flipped)
        tau = self.tau
        if self.inp_family:
            attempts = [(INP, INP, 2, True, False)]
            if USED in tau:
                attempts.append((USED, INP, 1, False, False))
            return attempts
        attempts = []
        if INP in tau:
            attempts.append((INP, RES, 1, True, False))
        if OUT in tau:
            attempts.append((INP, RES, 1, True, True))
        if USED in tau:
            attempts.append((USED, RES, 1, False, False))
        if FREE in tau:
            attempts.append((USED, RES, 1, False, True))
        return attempts

    def essp_candidates(self, k: str, s: str) -> Iterator[Candidate]:
        if k not in self.occurrences:
            for bit in (0, 1):
                for interaction in self.tau.ordered():
                    if interaction_apply(interaction, bit) is None:
                        yield self.states[0], bit, self._signature(NOP, {k: interaction})
            return
        for k_sig, scanned, least, distinct_case, flipped in self._essp_attempts():
            for candidate in self._essp_family(k, s, k_sig, scanned, least, distinct_case):
                yield _flip_candidate(candidate) if flipped else candidate

    def _essp_family(self, k: str, s: str, k_sig: Interaction, scanned: Interaction,
                     least: int, distinct_case: bool) -> Iterator[Candidate]:
        size, ev = self.size, self.events
        p = self.position[s]
        previous = (p - 1) % size
        if ev[previous] == k:
            if k_sig == INP:
                yield self.states[previous], 1, self._signature(SET, {k: INP})
            return

        q = previous
        while ev[q] != k:
            q = (q - 1) % size
        j = (p - q - 1) % size
        y = [ev[(q + step) % size] for step in range(1, j + 1)]
        start = self.states[q]

        if distinct_case and k_sig == INP:
            chosen = self._distinct_events(k, q, p, set(y))
            if chosen is not None:
                overrides = {e: SET for e in chosen}
                overrides[k] = INP
                yield start, 1, self._signature(NOP, overrides)

        for ell in range(j, least - 1, -1):
            y_ell, tail = y[ell - 1], y[ell:]
            if y_ell in tail:
                continue
            overrides = {e: NOP for e in tail}
            overrides[y_ell] = scanned
            overrides[k] = k_sig
            yield start, 1, self._signature(SET, overrides)

    def _distinct_events(self, k: str, q: int, p: int, before: set) -> Optional[List[str]]:
        """One event outside ``before`` from every k-segment, the segment of s counted from s on."""
        size, ev = self.size, self.events
        chosen = []
        for origin in self.occurrences[k]:
            t = (p if origin == q else origin + 1) % size
            pick = None
            while ev[t] != k:
                if ev[t] not in before:
                    pick = ev[t]
                    break
                t = (t + 1) % size
            if pick is None:
                return None
            chosen.append(pick)
        return chosen

    def ssp_candidates(self, s: str, other: str) -> Iterator[Candidate]:
        scanned = INP if self.inp_family else RES
        a, b = self.position[s], self.position[other]
        for u, v in ((a, b), (b, a)):
            span = (v - u) % self.size
            path = [self.events[(u + t) % self.size] for t in range(span)]
            for j in range(span, 0, -1):
                e_j, tail = path[j - 1], path[j:]
                if e_j in tail:
                    continue
                overrides = {e: NOP for e in tail}
                overrides[e_j] = scanned
                yield self.states[u], 1, self._signature(SET, overrides)

    # ------------------------------------------------------------------
    # decision
    # ------------------------------------------------------------------

    def decide(self, atoms: Sequence[SeparationAtom],
               accept: Optional[Callable[[Region], bool]] = None) -> Tuple[Verdict, List[Region], Optional[SeparationAtom]]:
        regions: List[Region] = []
        for atom in atoms:
            if any(region_solves(self.tau, r, atom) for r in regions):
                continue
            if isinstance(atom, StateSeparationAtom):
                candidates = self.ssp_candidates(atom.state, atom.other)
            else:
                candidates = self.essp_candidates(atom.event, atom.state)
            found = None
            for start, sup_init, sig in candidates:
                region = extend_region(self._rotated(start), self.tau, sup_init, sig)
                if region is None or not region_solves(self.tau, region, atom):
                    continue
                if accept is not None and not accept(region):
                    continue
                found = region
                break
            if found is None:
                logger.debug(f"No candidate region solves {atom}")
                return Verdict.UNSOLVABLE, [], atom
            regions.append(found)
        return Verdict.SOLVABLE, regions, None


def _decide_linear(ts: TransitionSystem, tau: NetType, atoms: Sequence[SeparationAtom],
                   accept: Optional[Callable[[Region], bool]] = None) -> PolytimeDecision:
    """Decide ``atoms`` of a 1-bounded ``ts`` for an oriented (inp or set/res based) type."""
    shape = classify_linear(ts)
    if shape.classification == ShapeKind.NEITHER:
        raise UnsupportedInputError(f"{ts.name} is neither a simple path nor a directed cycle")
    if shape.repeat_atom is not None:
        return PolytimeDecision(verdict=Verdict.UNSOLVABLE, atom=shape.repeat_atom)

    if shape.classification == ShapeKind.SIMPLE_PATH:
        cycle = cycle_extension(ts)
        shape = classify_linear(cycle)
    else:
        cycle = ts
    decider = _CycleDecider(cycle, shape, tau)
    verdict, regions, atom = decider.decide(atoms, accept)
    if verdict != Verdict.SOLVABLE:
        return PolytimeDecision(verdict=verdict, atom=atom)
    restricted = _unique_regions([r.restrict(ts.states, ts.events) for r in regions])
    return PolytimeDecision(verdict=Verdict.SOLVABLE, regions=restricted)


def _unique_regions(regions: Sequence[Region]) -> List[Region]:
    seen, result = set(), []
    for region in regions:
        if region.key() not in seen:
            seen.add(region.key())
            result.append(region)
    return result


def _transport_decision(decision: PolytimeDecision) -> PolytimeDecision:
    return decision.model_copy(update={"regions": [transport_region(FLIP, r) for r in decision.regions]})


def decide_one_bounded(ts: TransitionSystem, tau: NetType) -> PolytimeDecision:
    """Decide τ-solvability of a 1-bounded system for the path/cycle-tractable types."""
    if not _one_bounded_supported(tau):
        raise UnsupportedInputError(f"type {tau} is not handled by the 1-bounded decider")
    atoms = enumerate_atoms(ts)
    if tau.members in ONE_BOUNDED_FLIPPED:
        decision = _decide_linear(ts, transport(FLIP, tau), atoms)
        return _transport_decision(decision)
    return _decide_linear(ts, tau, atoms)


# ============================================================================
# Small bounds
# ============================================================================

def _condition(tau: NetType, g: int) -> int:
    row = complexity_row(tau)
    if row is not None:
        if row.row == 1 and g < 2:
            return 1
        if row.row == 2 and g < 3:
            return 2
        if row.row == 9 and g < 2:
            return 3
        if row.row in (10, 11):
            return 4
    raise UnsupportedInputError(f"no polynomial characterization for type {tau} at bound {g}")


def decide_small_g(ts: TransitionSystem, tau: NetType, g: int) -> PolytimeDecision:
    """Decide τ-solvability of a g-bounded system under the small-bound characterizations."""
    if g < 0:
        raise ValueError("bound g must be a natural number")
    condition = _condition(tau, g)
    bound = compute_bound(ts)
    if bound > g:
        raise UnsupportedInputError(f"{ts.name} is {bound}-bounded, not {g}-bounded")

    if condition == 1:
        if INP in tau:
            decision = _loop_or_distinct_path(ts, tau)
        else:
            decision = _transport_decision(_loop_or_distinct_path(ts, transport(FLIP, tau)))
    elif condition == 2:
        decision = _loop_ladder(ts, tau)
    elif condition == 3:
        decision = _tiny_swap_system(ts, tau, g)
    else:
        decision = _initially_enabled(ts, tau, g) if complexity_row(tau).row == 10 else _brute_force(ts, tau, g)
    return decision.model_copy(update={"condition": condition})


def _loop_or_distinct_path(ts: TransitionSystem, tau: NetType) -> PolytimeDecision:
    """Types {nop,inp,free} and {nop,inp,used,free}: supports never increase along arcs."""
    shape = classify_linear(ts)
    if shape.classification == ShapeKind.DIRECTED_CYCLE and len(shape.events) >= 2:
        return PolytimeDecision(verdict=Verdict.UNSOLVABLE,
                                atom=StateSeparationAtom(state=shape.states[0], other=shape.states[1]))
    if shape.classification == ShapeKind.SIMPLE_PATH:
        last: Dict[str, int] = {}
        for t, event in enumerate(shape.events):
            last[event] = t
        for event, t in last.items():
            if shape.events.count(event) > 1:
                return PolytimeDecision(verdict=Verdict.UNSOLVABLE,
                                        atom=EventStateSeparationAtom(event=event, state=shape.states[t + 1]))

    position = {s: t for t, s in enumerate(shape.states)}
    occurring = {e: t for t, e in enumerate(shape.events)}
    regions: List[Region] = []

    def build(sup_init: int, overrides: Dict[str, Interaction]) -> Region:
        sig = {e: NOP for e in ts.events}
        sig.update(overrides)
        region = extend_region(ts, tau, sup_init, sig)
        if region is None or not region_valid(ts, tau, region):
            raise BoolSynthError(f"witness construction failed on {ts.name}")
        return region

    for atom in enumerate_atoms(ts):
        if any(region_solves(tau, r, atom) for r in regions):
            continue
        if isinstance(atom, StateSeparationAtom):
            a, b = sorted((position[atom.state], position[atom.other]))
            region = build(1, {shape.events[a]: INP})
        elif atom.event not in occurring:
            region = build(0, {atom.event: INP})
        else:
            t = occurring[atom.event]
            u = position[atom.state]
            if u > t:
                region = build(1, {atom.event: INP})
            else:
                region = build(1, {shape.events[u]: INP, atom.event: FREE})
        regions.append(region)
    return PolytimeDecision(verdict=Verdict.SOLVABLE, regions=_unique_regions(regions))


def _loop_ladder(ts: TransitionSystem, tau: NetType) -> PolytimeDecision:
    """Types {nop,set,res} with used/free at bound 2: every entered state must loop its entry event."""
    for src, event, dst in ts.arcs:
        if src == dst or ts.successor(dst, event) == dst:
            continue
        follow = ts.successor(dst, event)
        if follow is None:
            atom: SeparationAtom = EventStateSeparationAtom(event=event, state=dst)
        else:
            atom = StateSeparationAtom(state=dst, other=follow)
        return PolytimeDecision(verdict=Verdict.UNSOLVABLE, atom=atom)

    entries = {(dst, event) for src, event, dst in ts.arcs if src != dst}
    for src, event, dst in ts.loops():
        if (src, event) not in entries:
            raise UnsupportedInputError(f"loop {event} at {src} is not entered by {event}")

    erased = loop_erasement(ts)
    if compute_bound(erased) > 1:
        raise UnsupportedInputError(f"loop erasement of {ts.name} is not a path or a cycle")
    return _decide_linear(erased, tau, enumerate_atoms(ts), accept=lambda r: region_valid(ts, tau, r))


def _brute_force(ts: TransitionSystem, tau: NetType, g: int) -> PolytimeDecision:
    """Enumerate the at most 2·|τ|^g candidate regions per atom while |E| ≤ g, else search atom by atom."""
    if len(ts.events) > g:
        return _search_atoms(ts, tau)
    witnesses: List[Region] = []
    for atom in enumerate_atoms(ts):
        if any(region_solves(tau, r, atom) for r in witnesses):
            continue
        region = next((r for r in all_regions(ts, tau) if region_solves(tau, r, atom)), None)
        if region is None:
            return PolytimeDecision(verdict=Verdict.UNSOLVABLE, atom=atom)
        witnesses.append(region)
    return PolytimeDecision(verdict=Verdict.SOLVABLE, regions=witnesses)


def _search_atoms(ts: TransitionSystem, tau: NetType) -> PolytimeDecision:
    decision = decide_solvable(ts, tau)
    if decision.verdict == Verdict.SOLVABLE:
        return PolytimeDecision(verdict=Verdict.SOLVABLE, regions=decision.admissible.regions)
    return PolytimeDecision(verdict=decision.verdict, atom=decision.atom)


def _tiny_swap_system(ts: TransitionSystem, tau: NetType, g: int) -> PolytimeDecision:
    if len(ts.states) > 3:
        failing = None
        for atom in enumerate_atoms(ts):
            if solve_atom(ts, tau, atom).status == SolveStatus.UNSOLVABLE:
                failing = atom
                break
        return PolytimeDecision(verdict=Verdict.UNSOLVABLE, atom=failing)
    return _brute_force(ts, tau, g)


def _initially_enabled(ts: TransitionSystem, tau: NetType, g: int) -> PolytimeDecision:
    """Row-10 types: an event missing at the initial state leaves that ESSP atom unsolvable."""
    occurring = []
    for _, event, _ in ts.arcs:
        if event not in occurring:
            occurring.append(event)
    for event in occurring:
        if not ts.enabled(ts.initial, event):
            return PolytimeDecision(verdict=Verdict.UNSOLVABLE,
                                    atom=EventStateSeparationAtom(event=event, state=ts.initial))
    return _brute_force(ts, tau, g)
