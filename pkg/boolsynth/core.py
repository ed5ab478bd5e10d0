"""
Boolean interactions, net types, transition systems and the complexity table.

This module holds the immutable value types every other module builds on:

- the eight partial functions on {0,1} (``Interaction``) and the types of
  nets made from them (``NetType``)
- initialized labeled transition systems with validation and boundedness
- type isomorphisms and their action on types and regions
- the complexity classifier for nop-containing types
"""

from collections import deque
from enum import Enum
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from .errors import InvalidTransitionSystemError, IsomorphismError
from .utils import get_logger

logger = get_logger(__name__)

Bit = int
Arc = Tuple[str, str, str]


# ============================================================================
# Interactions
# ============================================================================

class Interaction(str, Enum):
    NOP = "nop"
    INP = "inp"
    OUT = "out"
    SET = "set"
    RES = "res"
    SWAP = "swap"
    USED = "used"
    FREE = "free"

    def __str__(self) -> str:
        return self.value

    def apply(self, x: Bit) -> Optional[Bit]:
        return _TABLE[self][x]


INTERACTION_ORDER: Tuple[Interaction, ...] = tuple(Interaction)

# value at 0, value at 1
_TABLE: Dict[Interaction, Tuple[Optional[Bit], Optional[Bit]]] = {
    Interaction.NOP: (0, 1),
    Interaction.INP: (None, 0),
    Interaction.OUT: (1, None),
    Interaction.SET: (1, 1),
    Interaction.RES: (0, 0),
    Interaction.SWAP: (1, 0),
    Interaction.USED: (None, 1),
    Interaction.FREE: (0, None),
}

ENTER: FrozenSet[Interaction] = frozenset({Interaction.OUT, Interaction.SET, Interaction.SWAP})
EXIT: FrozenSet[Interaction] = frozenset({Interaction.INP, Interaction.RES, Interaction.SWAP})
KEEP_PLUS: FrozenSet[Interaction] = frozenset({Interaction.NOP, Interaction.SET, Interaction.USED})
KEEP_MINUS: FrozenSet[Interaction] = frozenset({Interaction.NOP, Interaction.RES, Interaction.FREE})


def interaction_apply(i: Interaction, x: Bit) -> Optional[Bit]:
    """Evaluate the partial function ``i`` at ``x``; ``None`` where it is undefined."""
    if x not in (0, 1):
        raise ValueError(f"state of a Boolean type must be 0 or 1, got {x!r}")
    return _TABLE[Interaction(i)][x]


def parse_interactions(spec: str) -> List[Interaction]:
    """Parse ``"nop,inp,free"`` (braces and blanks allowed) into interactions."""
    names = [name.strip().lower() for name in spec.strip().strip("{}").split(",")]
    result: List[Interaction] = []
    for name in names:
        if not name:
            continue
        try:
            interaction = Interaction(name)
        except ValueError:
            raise ValueError(f"unknown interaction '{name}'") from None
        if interaction in result:
            logger.warning(f"Duplicate interaction '{name}' in type declaration ignored")
            continue
        result.append(interaction)
    return result


# ============================================================================
# Types of nets
# ============================================================================

class NetType(BaseModel):
    """A Boolean type of nets: a nonempty set of interactions with step function δ_τ."""

    model_config = ConfigDict(frozen=True)

    members: FrozenSet[Interaction] = Field(..., description="Interactions of the type")

    @field_validator("members")
    @classmethod
    def _nonempty(cls, value: FrozenSet[Interaction]) -> FrozenSet[Interaction]:
        if not value:
            raise ValueError("a type of nets needs at least one interaction")
        return value

    @classmethod
    def of(cls, *interactions: Interaction) -> "NetType":
        return cls(members=frozenset(Interaction(i) for i in interactions))

    @classmethod
    def parse(cls, spec: str) -> "NetType":
        return cls(members=frozenset(parse_interactions(spec)))

    @classmethod
    def all_with_nop(cls) -> List["NetType"]:
        """All 128 types that contain nop, in a stable order."""
        others = INTERACTION_ORDER[1:]
        found = []
        for size in range(len(others) + 1):
            for combo in combinations(others, size):
                found.append(cls.of(Interaction.NOP, *combo))
        return found

    def ordered(self) -> List[Interaction]:
        return [i for i in INTERACTION_ORDER if i in self.members]

    def step(self, x: Bit, i: Interaction) -> Optional[Bit]:
        return type_step(self, x, i)

    def __contains__(self, item: object) -> bool:
        return item in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        return "{" + ",".join(i.value for i in self.ordered()) + "}"

    def spec(self) -> str:
        return ",".join(i.value for i in self.ordered())


def type_step(tau: NetType, x: Bit, i: Interaction) -> Optional[Bit]:
    """δ_τ(x, i): defined only for members of ``tau``."""
    if i not in tau.members:
        return None
    return interaction_apply(i, x)


# ============================================================================
# Transition systems
# ============================================================================

class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["determinism", "reachability", "undeclared"]
    subject: str
    detail: str


class ValidationReport(BaseModel):
    violations: List[Violation] = Field(default_factory=list)

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def of_kind(self, kind: str) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]

    def summary(self) -> str:
        if self.is_valid:
            return "valid"
        return "; ".join(f"{v.kind}: {v.detail}" for v in self.violations)


class TransitionSystem(BaseModel):
    """An initialized labeled transition system A = (S, E, δ, ι).

    Construction stores the declaration as given; ``validate_ts`` reports
    determinism, reachability and declaration problems and
    ``require_valid`` turns them into an exception.
    """

    model_config = ConfigDict(frozen=True)

    name: str = "A"
    states: Tuple[str, ...]
    events: Tuple[str, ...]
    arcs: Tuple[Arc, ...] = ()
    initial: str

    _delta: Dict[Tuple[str, str], str] = PrivateAttr(default_factory=dict)
    _out: Dict[str, List[Tuple[str, str]]] = PrivateAttr(default_factory=dict)
    _in: Dict[str, List[Tuple[str, str]]] = PrivateAttr(default_factory=dict)
    _report: Optional[ValidationReport] = PrivateAttr(default=None)

    def model_post_init(self, __context) -> None:
        out: Dict[str, List[Tuple[str, str]]] = {s: [] for s in self.states}
        inc: Dict[str, List[Tuple[str, str]]] = {s: [] for s in self.states}
        delta: Dict[Tuple[str, str], str] = {}
        for src, event, dst in self.arcs:
            out.setdefault(src, []).append((event, dst))
            inc.setdefault(dst, []).append((event, src))
            delta.setdefault((src, event), dst)
        self._delta = delta
        self._out = out
        self._in = inc

    @classmethod
    def from_arcs(
        cls,
        initial: str,
        arcs: Iterable[Arc],
        name: str = "A",
        states: Sequence[str] = (),
        events: Sequence[str] = (),
    ) -> "TransitionSystem":
        """Build a TS, inferring states/events from the arcs and dropping duplicates."""
        unique_arcs: List[Arc] = []
        seen = set()
        for arc in arcs:
            arc = (str(arc[0]), str(arc[1]), str(arc[2]))
            if arc in seen:
                logger.warning(f"Duplicate arc {arc[0]} -{arc[1]}-> {arc[2]} ignored")
                continue
            seen.add(arc)
            unique_arcs.append(arc)

        state_list = _unique([initial, *states, *(s for a in unique_arcs for s in (a[0], a[2]))], "state")
        event_list = _unique([*events, *(a[1] for a in unique_arcs)], "event", warn_from=len(events))
        return cls(name=name, states=tuple(state_list), events=tuple(event_list),
                   arcs=tuple(unique_arcs), initial=initial)

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    def successor(self, state: str, event: str) -> Optional[str]:
        return self._delta.get((state, event))

    def enabled(self, state: str, event: str) -> bool:
        return (state, event) in self._delta

    def out_arcs(self, state: str) -> List[Tuple[str, str]]:
        return self._out.get(state, [])

    def in_arcs(self, state: str) -> List[Tuple[str, str]]:
        return self._in.get(state, [])

    def loops(self) -> List[Arc]:
        return [a for a in self.arcs if a[0] == a[2]]

    def bfs_order(self) -> List[str]:
        """States in breadth-first order from ι, successors taken in arc order."""
        seen = {self.initial}
        order = [self.initial]
        queue = deque([self.initial])
        while queue:
            state = queue.popleft()
            for _, dst in self._out.get(state, []):
                if dst not in seen:
                    seen.add(dst)
                    order.append(dst)
                    queue.append(dst)
        return order

    def bfs_event_order(self) -> List[str]:
        """Events in order of first occurrence along the BFS, then unused events."""
        order: List[str] = []
        seen = set()
        for state in self.bfs_order():
            for event, _ in self._out.get(state, []):
                if event not in seen:
                    seen.add(event)
                    order.append(event)
        order.extend(e for e in self.events if e not in seen)
        return order

    def with_initial(self, state: str) -> "TransitionSystem":
        return TransitionSystem(name=self.name, states=self.states, events=self.events,
                                arcs=self.arcs, initial=state)

    def report(self) -> ValidationReport:
        if self._report is None:
            self._report = validate_ts(self)
        return self._report

    def require_valid(self) -> "TransitionSystem":
        report = self.report()
        if not report.is_valid:
            raise InvalidTransitionSystemError(report)
        return self


def _unique(items: Sequence[str], what: str, warn_from: int = -1) -> List[str]:
    result: List[str] = []
    seen = set()
    for position, item in enumerate(items):
        if item in seen:
            if position < warn_from:
                logger.warning(f"Duplicate {what} declaration '{item}' ignored")
            continue
        seen.add(item)
        result.append(item)
    return result


def validate_ts(ts: TransitionSystem) -> ValidationReport:
    """Report undeclared identifiers, nondeterministic arcs and unreachable states."""
    violations: List[Violation] = []
    states = set(ts.states)
    events = set(ts.events)

    if ts.initial not in states:
        violations.append(Violation(kind="undeclared", subject=ts.initial,
                                    detail=f"initial state '{ts.initial}' is not declared"))
    for src, event, dst in ts.arcs:
        for state in (src, dst):
            if state not in states:
                violations.append(Violation(kind="undeclared", subject=state,
                                            detail=f"state '{state}' used by an arc is not declared"))
        if event not in events:
            violations.append(Violation(kind="undeclared", subject=event,
                                        detail=f"event '{event}' used by an arc is not declared"))

    targets: Dict[Tuple[str, str], List[str]] = {}
    for src, event, dst in ts.arcs:
        bucket = targets.setdefault((src, event), [])
        if dst not in bucket:
            bucket.append(dst)
    for (src, event), dsts in targets.items():
        if len(dsts) > 1:
            violations.append(Violation(
                kind="determinism", subject=f"{src},{event}",
                detail=f"event '{event}' at state '{src}' leads to {', '.join(dsts)}"))

    reached = set(ts.bfs_order()) if ts.initial in states else set()
    for state in ts.states:
        if state not in reached:
            violations.append(Violation(kind="reachability", subject=state,
                                        detail=f"state '{state}' is not reachable from '{ts.initial}'"))
    return ValidationReport(violations=violations)


def compute_bound(ts: TransitionSystem) -> int:
    """Least g such that every state has at most g incoming and g outgoing arcs."""
    ts.require_valid()
    bound = 0
    for state in ts.states:
        bound = max(bound, len(ts.out_arcs(state)), len(ts.in_arcs(state)))
    return bound


# ============================================================================
# Regions (data only; search lives in regions.py)
# ============================================================================

class Region(BaseModel):
    """A pair (sup, sig) of support and signature."""

    model_config = ConfigDict(frozen=True)

    support: Dict[str, int] = Field(..., description="State -> 0/1")
    signature: Dict[str, Interaction] = Field(..., description="Event -> interaction")

    @field_validator("support")
    @classmethod
    def _boolean_support(cls, value: Dict[str, int]) -> Dict[str, int]:
        for state, bit in value.items():
            if bit not in (0, 1):
                raise ValueError(f"support of '{state}' must be 0 or 1, got {bit!r}")
        return value

    def key(self) -> Tuple[Tuple[Tuple[str, int], ...], Tuple[Tuple[str, str], ...]]:
        return (tuple(sorted(self.support.items())),
                tuple(sorted((e, i.value) for e, i in self.signature.items())))

    def restrict(self, states: Iterable[str], events: Iterable[str]) -> "Region":
        return Region(support={s: self.support[s] for s in states},
                      signature={e: self.signature[e] for e in events})


# ============================================================================
# Type isomorphisms
# ============================================================================

class TypeIsomorphism(BaseModel):
    model_config = ConfigDict(frozen=True)

    state_map: Dict[int, int]
    interaction_map: Dict[Interaction, Interaction]

    @model_validator(mode="after")
    def _bijective(self) -> "TypeIsomorphism":
        if sorted(self.state_map) != [0, 1] or sorted(self.state_map.values()) != [0, 1]:
            raise ValueError("state_map must be a bijection on {0,1}")
        if len(set(self.interaction_map.values())) != len(self.interaction_map):
            raise ValueError("interaction_map must be injective")
        return self

    def map_interaction(self, i: Interaction) -> Interaction:
        try:
            return self.interaction_map[i]
        except KeyError:
            raise IsomorphismError(f"interaction '{i}' is outside the mapping's domain") from None

    def inverse(self) -> "TypeIsomorphism":
        return TypeIsomorphism(
            state_map={v: k for k, v in self.state_map.items()},
            interaction_map={v: k for k, v in self.interaction_map.items()},
        )

    def check(self, tau: NetType) -> None:
        """Raise IsomorphismError unless the mapping preserves every transition of ``tau``."""
        for i in tau.members:
            image = self.map_interaction(i)
            for x in (0, 1):
                y = interaction_apply(i, x)
                y_image = interaction_apply(image, self.state_map[x])
                if (y is None) != (y_image is None):
                    raise IsomorphismError(
                        f"{i}({x}) and {image}({self.state_map[x]}) differ in definedness")
                if y is not None and self.state_map[y] != y_image:
                    raise IsomorphismError(f"{i}({x}) is not carried onto {image}({self.state_map[x]})")


IDENTITY = TypeIsomorphism(state_map={0: 0, 1: 1}, interaction_map={i: i for i in INTERACTION_ORDER})

FLIP = TypeIsomorphism(
    state_map={0: 1, 1: 0},
    interaction_map={
        Interaction.NOP: Interaction.NOP,
        Interaction.SWAP: Interaction.SWAP,
        Interaction.INP: Interaction.OUT,
        Interaction.OUT: Interaction.INP,
        Interaction.SET: Interaction.RES,
        Interaction.RES: Interaction.SET,
        Interaction.USED: Interaction.FREE,
        Interaction.FREE: Interaction.USED,
    },
)


def transport(iso: TypeIsomorphism, tau: NetType) -> NetType:
    iso.check(tau)
    return NetType(members=frozenset(iso.map_interaction(i) for i in tau.members))


def transport_region(iso: TypeIsomorphism, region: Region) -> Region:
    return Region(
        support={s: iso.state_map[b] for s, b in region.support.items()},
        signature={e: iso.map_interaction(i) for e, i in region.signature.items()},
    )


# ============================================================================
# Complexity classification
# ============================================================================

class ComplexityClass(str, Enum):
    NP_COMPLETE = "NP-complete"
    POLYNOMIAL = "polynomial"
    OUT_OF_TABLE = "out-of-table"

    def __str__(self) -> str:
        return self.value


class ComplexityRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    row: int = Field(..., ge=1, le=11)
    threshold: Optional[int] = Field(None, description="Least g for NP-completeness; None if always polynomial")
    types: FrozenSet[NetType]


def _names(*names: str) -> FrozenSet[Interaction]:
    return frozenset(Interaction(n) for n in names)


def _family(base: Sequence[str], optional: Sequence[str], nonempty: bool = False) -> List[FrozenSet[Interaction]]:
    result = []
    for size in range(1 if nonempty else 0, len(optional) + 1):
        for omega in combinations(optional, size):
            result.append(_names(*base, *omega))
    return result


def _build_rows() -> List[ComplexityRow]:
    uf = ("used", "free")
    spec: List[Tuple[int, Optional[int], List[FrozenSet[Interaction]]]] = [
        (1, 2, [_names("nop", "inp", "free"), _names("nop", "inp", "used", "free"),
                _names("nop", "out", "used"), _names("nop", "out", "used", "free")]),
        (2, 3, _family(("nop", "set", "res"), uf, nonempty=True)),
        (3, 2, [_names("nop", "inp", "set"), _names("nop", "inp", "set", "used"),
                *_family(("nop", "inp", "res", "set"), ("out", "used", "free")),
                _names("nop", "out", "res"), _names("nop", "out", "res", "free"),
                *_family(("nop", "out", "res", "set"), ("inp", "used", "free"))]),
        (4, 1, _family(("nop", "inp", "out", "set"), uf) + _family(("nop", "inp", "out", "res"), uf)),
        (5, 1, [_names("nop", "inp", "set", "free"), _names("nop", "inp", "set", "used", "free"),
                _names("nop", "out", "res", "used"), _names("nop", "out", "res", "used", "free")]),
        (6, 1, _family(("nop", "inp", "res", "swap"), uf) + _family(("nop", "out", "set", "swap"), uf)),
        (7, 1, _family(("nop", "inp", "set", "swap"), ("out", "res", "used", "free"))
               + _family(("nop", "out", "res", "swap"), ("inp", "set", "used", "free"))),
        (8, 1, _family(("nop", "inp", "out"), uf)),
        (9, 2, _family(("nop", "set", "swap"), uf, nonempty=True)
               + _family(("nop", "res", "swap"), uf, nonempty=True)
               + _family(("nop", "res", "set", "swap"), uf, nonempty=True)),
        (10, None, [_names("nop", "inp"), _names("nop", "inp", "used"), _names("nop", "out"),
                    _names("nop", "out", "free"), _names("nop", "set", "swap"), _names("nop", "res", "swap"),
                    _names("nop", "set", "res"), _names("nop", "set", "res", "swap")]),
        (11, None, _family(("nop", "res"), ("inp", "used", "free"))
                   + _family(("nop", "set"), ("out", "used", "free"))
                   + _family(("nop", "swap"), ("inp", "out", "used", "free"))
                   + _family(("nop",), uf)),
    ]
    return [ComplexityRow(row=row, threshold=threshold,
                          types=frozenset(NetType(members=m) for m in members))
            for row, threshold, members in spec]


COMPLEXITY_ROWS: List[ComplexityRow] = _build_rows()


def complexity_row(tau: NetType) -> Optional[ComplexityRow]:
    for row in COMPLEXITY_ROWS:
        if tau in row.types:
            return row
    return None


def classify_complexity(tau: NetType, g: Optional[int]) -> ComplexityClass:
    """Classify τ-synthesis for g-bounded inputs; ``g=None`` means unbounded."""
    if g is not None and g < 0:
        raise ValueError("bound g must be a natural number")
    if Interaction.NOP not in tau.members:
        return ComplexityClass.OUT_OF_TABLE
    row = complexity_row(tau)
    if row is None:
        return ComplexityClass.OUT_OF_TABLE
    if row.threshold is None:
        return ComplexityClass.POLYNOMIAL
    if g is None or g >= row.threshold:
        return ComplexityClass.NP_COMPLETE
    return ComplexityClass.POLYNOMIAL

