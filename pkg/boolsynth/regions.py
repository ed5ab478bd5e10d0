"""
Separation atoms, region search, admissible sets and net synthesis.

A region of a reachable transition system is determined by the support of the
initial state and the signature of every event, so the search assigns those
and propagates supports along the arcs. Every arc is a ternary constraint
``δ_τ(sup(s), sig(e)) = sup(s')`` kept generalized-arc-consistent during a
depth-first search; the atom being solved adds one more constraint.
"""

from collections import deque
from enum import Enum
from itertools import product
from typing import Dict, Iterator, List, Literal, Mapping, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator
from tqdm import tqdm

from .core import (
    INTERACTION_ORDER,
    Interaction,
    NetType,
    Region,
    TransitionSystem,
    interaction_apply,
    type_step,
)
from .errors import InadmissibleRegionSetError
from .semantics import BooleanNet
from .utils import get_logger, run_timer

logger = get_logger(__name__)

DEFAULT_BUDGET = 10_000_000

__all__ = [
    "DEFAULT_BUDGET",
    "AdmissibleSet",
    "AtomOutcome",
    "Decision",
    "EventStateSeparationAtom",
    "Region",
    "SeparationAtom",
    "SeparationReport",
    "SolveStatus",
    "StateSeparationAtom",
    "Verdict",
    "all_regions",
    "decide_solvable",
    "enumerate_atoms",
    "extend_region",
    "region_solves",
    "region_valid",
    "separation_report",
    "solve_atom",
    "synthesize",
]


# ============================================================================
# Pydantic Models
# ============================================================================

class StateSeparationAtom(BaseModel):
    """SSP atom: two distinct states that need different supports."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["ssp"] = "ssp"
    state: str
    other: str

    @model_validator(mode="after")
    def _distinct(self) -> "StateSeparationAtom":
        if self.state == self.other:
            raise ValueError("an SSP atom needs two distinct states")
        return self

    def __str__(self) -> str:
        return f"({self.state},{self.other})"


class EventStateSeparationAtom(BaseModel):
    """ESSP atom: an event that must be inhibited at a state."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["essp"] = "essp"
    event: str
    state: str

    def __str__(self) -> str:
        return f"({self.event},{self.state})"


SeparationAtom = Union[StateSeparationAtom, EventStateSeparationAtom]


class SolveStatus(str, Enum):
    SOLVED = "solved"
    UNSOLVABLE = "unsolvable"
    BUDGET_EXHAUSTED = "budget-exhausted"


class AtomOutcome(BaseModel):
    status: SolveStatus
    region: Optional[Region] = None
    nodes: int = Field(0, ge=0, description="Search nodes spent")

    @property
    def found(self) -> bool:
        return self.status == SolveStatus.SOLVED


class Verdict(str, Enum):
    SOLVABLE = "solvable"
    UNSOLVABLE = "unsolvable"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


class AdmissibleSet(BaseModel):
    regions: List[Region] = Field(default_factory=list)
    witness: Dict[SeparationAtom, int] = Field(default_factory=dict)


class Decision(BaseModel):
    verdict: Verdict
    admissible: Optional[AdmissibleSet] = None
    atom: Optional[SeparationAtom] = Field(None, description="Failing or budget-limited atom")
    nodes: int = 0

    @property
    def solvable(self) -> bool:
        return self.verdict == Verdict.SOLVABLE


class SeparationReport(BaseModel):
    ssp: Verdict
    essp: Verdict
    failing_ssp: Optional[StateSeparationAtom] = None
    failing_essp: Optional[EventStateSeparationAtom] = None


# ============================================================================
# Regions
# ============================================================================

def region_valid(ts: TransitionSystem, tau: NetType, region: Region) -> bool:
    """True iff (sup, sig) is total, uses only τ and maps every arc onto a τ transition."""
    sup, sig = region.support, region.signature
    if any(s not in sup for s in ts.states) or any(e not in sig for e in ts.events):
        return False
    if any(sig[e] not in tau for e in ts.events):
        return False
    for src, event, dst in ts.arcs:
        if type_step(tau, sup[src], sig[event]) != sup[dst]:
            return False
    return True


def region_solves(tau: NetType, region: Region, atom: SeparationAtom) -> bool:
    if isinstance(atom, StateSeparationAtom):
        return region.support[atom.state] != region.support[atom.other]
    return type_step(tau, region.support[atom.state], region.signature[atom.event]) is None


def extend_region(
    ts: TransitionSystem, tau: NetType, sup_init: int, sig: Mapping[str, Interaction]
) -> Optional[Region]:
    """Propagate ``sup_init`` from ι along ``sig``; ``None`` on any inconsistent arc."""
    if sup_init not in (0, 1):
        raise ValueError("sup_init must be 0 or 1")
    missing = [e for e in ts.events if e not in sig]
    if missing:
        raise ValueError(f"signature does not assign event '{missing[0]}'")
    support = {ts.initial: sup_init}
    queue = deque([ts.initial])
    while queue:
        state = queue.popleft()
        for event, dst in ts.out_arcs(state):
            value = type_step(tau, support[state], sig[event])
            if value is None:
                return None
            known = support.get(dst)
            if known is None:
                support[dst] = value
                queue.append(dst)
            elif known != value:
                return None
    if len(support) != len(ts.states):
        return None
    return Region(support={s: support[s] for s in ts.states},
                  signature={e: Interaction(sig[e]) for e in ts.events})


def all_regions(ts: TransitionSystem, tau: NetType) -> Iterator[Region]:
    """Every τ-region of ``ts``, by trying all 2·|τ|^|E| (sup_init, sig) pairs."""
    members = tau.ordered()
    for sup_init in (0, 1):
        for values in product(members, repeat=len(ts.events)):
            region = extend_region(ts, tau, sup_init, dict(zip(ts.events, values)))
            if region is not None:
                yield region


def enumerate_atoms(ts: TransitionSystem) -> List[SeparationAtom]:
    """All SSP atoms (state pairs in declaration order), then all ESSP atoms."""
    atoms: List[SeparationAtom] = []
    for i, state in enumerate(ts.states):
        for other in ts.states[i + 1:]:
            atoms.append(StateSeparationAtom(state=state, other=other))
    for event in ts.events:
        for state in ts.states:
            if not ts.enabled(state, event):
                atoms.append(EventStateSeparationAtom(event=event, state=state))
    return atoms


def _check_atom(ts: TransitionSystem, atom: SeparationAtom) -> None:
    states = set(ts.states)
    if isinstance(atom, StateSeparationAtom):
        if atom.state not in states or atom.other not in states:
            raise ValueError(f"SSP atom {atom} names an unknown state")
        return
    if atom.state not in states or atom.event not in ts.events:
        raise ValueError(f"ESSP atom {atom} names an unknown state or event")
    if ts.enabled(atom.state, atom.event):
        raise ValueError(f"ESSP atom {atom}: event is enabled at the state")


# ============================================================================
# Search
# ============================================================================

_ARC, _SSP, _ESSP = 0, 1, 2
# value at 0 and at 1 for each interaction, indexed like INTERACTION_ORDER
_STEPS = [(interaction_apply(i, 0), interaction_apply(i, 1)) for i in INTERACTION_ORDER]


def _bits(mask: int) -> List[int]:
    return [k for k in range(8) if mask >> k & 1]


class _Problem:
    """A transition system compiled for repeated atom searches under one type."""

    def __init__(self, ts: TransitionSystem, tau: NetType):
        self.ts = ts
        self.tau = tau
        self.state_index = {s: n for n, s in enumerate(ts.states)}
        self.event_index = {e: n for n, e in enumerate(ts.events)}
        n_states = len(ts.states)
        self.n_states = n_states
        self.n_vars = n_states + len(ts.events)

        self.full_event = sum(1 << k for k, i in enumerate(INTERACTION_ORDER) if i in tau)
        self.constraints: List[Tuple[int, int, int, int]] = []
        self.var_constraints: List[List[int]] = [[] for _ in range(self.n_vars)]
        for src, event, dst in ts.arcs:
            s, e, d = self.state_index[src], n_states + self.event_index[event], self.state_index[dst]
            cid = len(self.constraints)
            self.constraints.append((_ARC, s, e, d))
            for var in {s, e, d}:
                self.var_constraints[var].append(cid)

        self.initial = self.state_index[ts.initial]
        self.event_order = [n_states + self.event_index[e] for e in ts.bfs_event_order()]
        self._arc_cache: Dict[int, Tuple[int, int, int]] = {}

    # ------------------------------------------------------------------
    # constraint revision
    # ------------------------------------------------------------------

    def _revise_arc(self, ds: int, de: int, dd: int, loop: bool) -> Tuple[int, int, int]:
        key = ds | dd << 2 | loop << 4 | de << 5
        cached = self._arc_cache.get(key)
        if cached is not None:
            return cached
        ns = ne = nd = 0
        for x in (0, 1):
            if not ds >> x & 1:
                continue
            for k in _bits(de):
                y = _STEPS[k][x]
                if y is None:
                    continue
                if loop:
                    if y != x:
                        continue
                elif not dd >> y & 1:
                    continue
                ns |= 1 << x
                ne |= 1 << k
                nd |= 1 << y
        if loop:
            nd = ns
        result = (ns, ne, nd)
        self._arc_cache[key] = result
        return result

    def _revise(self, constraint: Tuple[int, int, int, int], dom: List[int]) -> List[Tuple[int, int]]:
        kind, a, b, c = constraint
        if kind == _ARC:
            ns, ne, nd = self._revise_arc(dom[a], dom[b], dom[c], a == c)
            return [(a, ns), (b, ne), (c, nd)]
        if kind == _SSP:
            da, db = dom[a], dom[b]
            if da in (1, 2):
                db &= ~da
            if db in (1, 2):
                da &= ~db
            return [(a, da), (b, db)]
        # ESSP: b is the state, a the event
        de, ds = dom[a], dom[b]
        ne = ns = 0
        for x in (0, 1):
            if not ds >> x & 1:
                continue
            for k in _bits(de):
                if _STEPS[k][x] is None:
                    ns |= 1 << x
                    ne |= 1 << k
        return [(a, ne), (b, ns)]

    def _propagate(self, dom: List[int], pending: Sequence[int],
                   constraints: List[Tuple[int, int, int, int]], var_constraints: List[List[int]]) -> bool:
        queue = deque(pending)
        queued = set(pending)
        while queue:
            cid = queue.popleft()
            queued.discard(cid)
            for var, new in self._revise(constraints[cid], dom):
                if new == dom[var]:
                    continue
                if new == 0:
                    return False
                dom[var] = new
                for other in var_constraints[var]:
                    if other != cid and other not in queued:
                        queued.add(other)
                        queue.append(other)
        return True

    # ------------------------------------------------------------------
    # search
    # ------------------------------------------------------------------

    def solve(self, atom: SeparationAtom, budget: int,
              fixed: Optional[Mapping[str, Interaction]] = None) -> AtomOutcome:
        n_states = self.n_states
        constraints = list(self.constraints)
        var_constraints = list(self.var_constraints)
        atom_id = len(constraints)
        if isinstance(atom, StateSeparationAtom):
            a, b = self.state_index[atom.state], self.state_index[atom.other]
            constraints.append((_SSP, a, b, -1))
            atom_vars = [a, b]
            first: List[int] = []
        else:
            e, s = n_states + self.event_index[atom.event], self.state_index[atom.state]
            constraints.append((_ESSP, e, s, -1))
            atom_vars = [e, s]
            first = [e]
        for var in atom_vars:
            var_constraints[var] = var_constraints[var] + [atom_id]

        dom = [3] * n_states + [self.full_event] * (self.n_vars - n_states)
        for event, interaction in (fixed or {}).items():
            if interaction not in self.tau:
                raise ValueError(f"pinned signature {event}={interaction} is not in {self.tau}")
            dom[n_states + self.event_index[event]] = 1 << INTERACTION_ORDER.index(Interaction(interaction))

        if not self._propagate(dom, range(len(constraints)), constraints, var_constraints):
            return AtomOutcome(status=SolveStatus.UNSOLVABLE, nodes=0)

        order = first + [self.initial] + [v for v in self.event_order if v not in first] + list(range(n_states))
        initial_values = self._initial_values(atom)

        def values(var: int, d: List[int]) -> List[int]:
            if var == self.initial:
                return [1 << x for x in initial_values if d[var] >> x & 1]
            return [1 << k for k in _bits(d[var])]

        def next_open(d: List[int], start: int) -> Optional[int]:
            for pos in range(start, len(order)):
                mask = d[order[pos]]
                if mask & (mask - 1):
                    return pos
            return None

        nodes = 0
        pos = next_open(dom, 0)
        if pos is None:
            return AtomOutcome(status=SolveStatus.SOLVED, region=self._region(dom), nodes=0)
        stack = [[dom, pos, values(order[pos], dom), 0]]
        while stack:
            frame = stack[-1]
            saved, pos, vals, tried = frame
            if tried >= len(vals):
                stack.pop()
                continue
            frame[3] = tried + 1
            nodes += 1
            if nodes > budget:
                return AtomOutcome(status=SolveStatus.BUDGET_EXHAUSTED, nodes=nodes)
            var = order[pos]
            child = list(saved)
            child[var] = vals[tried]
            if not self._propagate(child, var_constraints[var], constraints, var_constraints):
                continue
            nxt = next_open(child, pos + 1)
            if nxt is None:
                return AtomOutcome(status=SolveStatus.SOLVED, region=self._region(child), nodes=nodes)
            stack.append([child, nxt, values(order[nxt], child), 0])
        return AtomOutcome(status=SolveStatus.UNSOLVABLE, nodes=nodes)

    def _initial_values(self, atom: SeparationAtom) -> List[int]:
        if isinstance(atom, EventStateSeparationAtom):
            undefined_at = [x for x in (0, 1)
                            if any(interaction_apply(i, x) is None for i in self.tau.members)]
            return undefined_at + [x for x in (0, 1) if x not in undefined_at]
        return [0, 1]

    def _region(self, dom: List[int]) -> Region:
        support = {s: (0 if dom[n] == 1 else 1) for s, n in self.state_index.items()}
        signature = {e: INTERACTION_ORDER[dom[self.n_states + n].bit_length() - 1]
                     for e, n in self.event_index.items()}
        return Region(support=support, signature=signature)


def solve_atom(
    ts: TransitionSystem,
    tau: NetType,
    atom: SeparationAtom,
    budget: int = DEFAULT_BUDGET,
    fixed: Optional[Mapping[str, Interaction]] = None,
) -> AtomOutcome:
    """Search a τ-region solving ``atom``.

    Args:
        ts: valid transition system the atom belongs to
        tau: type of nets
        atom: SSP or ESSP atom of ``ts``
        budget: maximal number of search nodes
        fixed: signatures pinned before the search starts

    Returns:
        AtomOutcome: solved with a region, proven unsolvable, or budget exhausted
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    ts.require_valid()
    _check_atom(ts, atom)
    return _Problem(ts, tau).solve(atom, budget, fixed)


def decide_solvable(
    ts: TransitionSystem,
    tau: NetType,
    budget: int = DEFAULT_BUDGET,
    progress: bool = False,
) -> Decision:
    """Solve every atom of ``ts``, reusing regions, and collect an admissible set."""
    if budget < 1:
        raise ValueError("budget must be at least 1")
    ts.require_valid()
    problem = _Problem(ts, tau)
    atoms = enumerate_atoms(ts)
    regions: List[Region] = []
    witness: Dict[SeparationAtom, int] = {}
    nodes = 0

    with run_timer(f"decide_solvable[{ts.name}, {tau}]"):
        iterator = tqdm(atoms, desc=f"atoms of {ts.name}", unit="atom", disable=not progress)
        for atom in iterator:
            reused = next((n for n, r in enumerate(regions) if region_solves(tau, r, atom)), None)
            if reused is not None:
                witness[atom] = reused
                continue
            outcome = problem.solve(atom, budget)
            nodes += outcome.nodes
            if outcome.status == SolveStatus.UNSOLVABLE:
                logger.debug(f"Atom {atom} of {ts.name} is not {tau}-solvable")
                return Decision(verdict=Verdict.UNSOLVABLE, atom=atom, nodes=nodes)
            if outcome.status == SolveStatus.BUDGET_EXHAUSTED:
                logger.warning(f"Budget of {budget} nodes exhausted on atom {atom}")
                return Decision(verdict=Verdict.INCONCLUSIVE, atom=atom, nodes=nodes)
            regions.append(outcome.region)
            witness[atom] = len(regions) - 1
            logger.debug(f"Atom {atom} solved after {outcome.nodes} nodes")

    logger.debug(f"{ts.name} is {tau}-solvable with {len(regions)} regions for {len(atoms)} atoms")
    return Decision(verdict=Verdict.SOLVABLE, admissible=AdmissibleSet(regions=regions, witness=witness),
                    nodes=nodes)


def separation_report(ts: TransitionSystem, tau: NetType, budget: int = DEFAULT_BUDGET) -> SeparationReport:
    """Evaluate the τ-SSP and the τ-ESSP of ``ts`` independently."""
    ts.require_valid()
    problem = _Problem(ts, tau)
    atoms = enumerate_atoms(ts)
    verdicts: Dict[str, Tuple[Verdict, Optional[SeparationAtom]]] = {}
    for kind in ("ssp", "essp"):
        regions: List[Region] = []
        verdict, failing = Verdict.SOLVABLE, None
        for atom in (a for a in atoms if a.kind == kind):
            if any(region_solves(tau, r, atom) for r in regions):
                continue
            outcome = problem.solve(atom, budget)
            if outcome.found:
                regions.append(outcome.region)
                continue
            verdict = Verdict.UNSOLVABLE if outcome.status == SolveStatus.UNSOLVABLE else Verdict.INCONCLUSIVE
            failing = atom
            break
        verdicts[kind] = (verdict, failing)
    return SeparationReport(ssp=verdicts["ssp"][0], failing_ssp=verdicts["ssp"][1],
                            essp=verdicts["essp"][0], failing_essp=verdicts["essp"][1])


# ============================================================================
# Synthesis
# ============================================================================

def synthesize(ts: TransitionSystem, tau: NetType, admissible: AdmissibleSet, name: Optional[str] = None) -> BooleanNet:
    """Build N^R_A: one place per region, transitions E, f = sig, H0 = sup(ι)."""
    ts.require_valid()
    for n, region in enumerate(admissible.regions):
        if not region_valid(ts, tau, region):
            raise InadmissibleRegionSetError(f"region {n} is not a {tau}-region of {ts.name}")
    for atom in enumerate_atoms(ts):
        index = admissible.witness.get(atom)
        if index is not None and 0 <= index < len(admissible.regions) \
                and region_solves(tau, admissible.regions[index], atom):
            continue
        if not any(region_solves(tau, r, atom) for r in admissible.regions):
            raise InadmissibleRegionSetError(f"no region solves atom {atom}", atom=atom)

    prefix = "p"
    while any(f"{prefix}{n}" in ts.events for n in range(len(admissible.regions))):
        prefix = "_" + prefix
    places = tuple(f"{prefix}{n}" for n in range(len(admissible.regions)))
    keep_nop = Interaction.NOP in tau
    flow = {}
    for place, region in zip(places, admissible.regions):
        flow[place] = {e: region.signature[e] for e in ts.events
                       if not (keep_nop and region.signature[e] == Interaction.NOP)}
    return BooleanNet(
        name=name or f"n_{ts.name}",
        net_type=tau,
        places=places,
        transitions=tuple(ts.events),
        initial_marking={p: r.support[ts.initial] for p, r in zip(places, admissible.regions)},
        flow=flow,
    )
