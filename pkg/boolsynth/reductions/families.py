"""
Gadget builders A^τ_φ for the seven reduction families.

Each family covers a set of base types together with their images under
FLIP. A builder always works on the base orientation of the requested type;
the emitted transition system is the same for a type and its flipped twin.
"""

from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..core import FLIP, Interaction, NetType, TransitionSystem, compute_bound, transport
from ..errors import GadgetError
from ..regions import EventStateSeparationAtom
from ..utils import get_logger, run_timer
from .builder import GadgetBuilder
from .instances import OneInThreeInstance

logger = get_logger(__name__)


class Family(str, Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5 = "T5"
    T6 = "T6"
    T7 = "T7"

    def __str__(self) -> str:
        return self.value


# ============================================================================
# Pydantic Models
# ============================================================================

class GadgetOutput(BaseModel):
    """A^τ_φ with its designated ESSP atom α."""

    model_config = ConfigDict(frozen=True)

    ts: TransitionSystem
    net_type: NetType
    designated_atom: EventStateSeparationAtom
    family: Family
    declared_bound: int = Field(..., ge=1, le=3)
    flipped: bool = Field(False, description="net_type is the FLIP image of the family's base type")

    @property
    def base_type(self) -> NetType:
        return transport(FLIP, self.net_type) if self.flipped else self.net_type


# ============================================================================
# Helper Functions
# ============================================================================

def _var(x: int) -> str:
    return f"X_{x}"


def _rotations(clause: Tuple[int, int, int]) -> List[Tuple[int, int, int]]:
    a, b, c = clause
    return [(a, b, c), (b, c, a), (c, a, b)]


Built = Tuple[TransitionSystem, EventStateSeparationAtom]


def _build_t1(phi: OneInThreeInstance, tau: NetType) -> Built:
    b = GadgetBuilder(f"T1_m{phi.m}")
    entries = []
    for i, clause in enumerate(phi.clauses):
        t = b.path(f"t_{i}", [*(_var(x) for x in clause), "k_1"])
        t.arc(f"t_{i}_0", "k_0", f"t_{i}_5")
        entries.append(t.first)
    entries.append(b.path("m", ["k_0", "k_1"]).first)
    b.join_bottom(entries)
    return b.build(), EventStateSeparationAtom(event="k_1", state="m_0")


def _build_t2(phi: OneInThreeInstance, tau: NetType) -> Built:
    b = GadgetBuilder(f"T2_m{phi.m}")
    h0 = b.path("h_0", ["k_0", "k_1"]).loop("h_0_1", "k_0").loop("h_0_2", "k_1")
    h1 = b.path("h_1", ["k_2"]).loop("h_1_0", "k_0").loop("h_1_1", "k_2", "k_1")
    h2 = b.path("h_2", ["k_3"]).loop("h_2_0", "k_1").loop("h_2_1", "k_3", "k_0")
    entries = [h0.first, h1.first, h2.first]

    for j in range(16 * phi.m):
        z, c0, c1 = f"z_{j}", f"c_{2 * j}", f"c_{2 * j + 1}"
        f = b.path(f"f_{j}", [z, c0, c1, z])
        f.loop(f"f_{j}_1", z, "k_2").loop(f"f_{j}_2", c0).loop(f"f_{j}_3", c1).loop(f"f_{j}_4", z, "k_3")
        entries.append(f.first)

    # y loops at t2 and t4, indexed by the clause position they watch
    watched = [(1, 2), (0, 1), (0, 2)]
    for i, clause in enumerate(phi.clauses):
        for n, (xa, xb, xc) in enumerate(_rotations(clause)):
            zs = [f"z_{16 * i + 4 * n + r}" for r in range(4)]
            prefix = f"t_{i}_{n}"
            t = b.path(prefix, [zs[0], _var(xa), zs[1], _var(xb), zs[2], _var(xc), zs[3]])
            t.loop(f"{prefix}_0", "k_0")
            for pos, z in zip((1, 3, 5, 7), zs):
                t.loop(f"{prefix}_{pos}", z)
            t.loop(f"{prefix}_2", _var(xa), f"y_{3 * i + watched[n][0]}")
            t.loop(f"{prefix}_4", _var(xb), f"y_{3 * i + watched[n][1]}")
            t.loop(f"{prefix}_6", _var(xc))
            t.loop(f"{prefix}_7", "k_1")
            entries.append(t.first)
    for i in range(phi.m):
        zs = [f"z_{16 * i + 12 + r}" for r in range(4)]
        ys = [f"y_{3 * i + r}" for r in range(3)]
        prefix = f"t_{i}_3"
        t = b.path(prefix, [zs[0], ys[0], zs[1], ys[1], zs[2], ys[2], zs[3]])
        t.loop(f"{prefix}_0", "k_1")
        for pos, z in zip((1, 3, 5, 7), zs):
            t.loop(f"{prefix}_{pos}", z)
        for pos, y in zip((2, 4, 6), ys):
            t.loop(f"{prefix}_{pos}", y)
        t.loop(f"{prefix}_7", "k_0")
        entries.append(t.first)

    b.join_bottom(entries, loops=True)
    return b.build(), EventStateSeparationAtom(event="k_0", state="h_0_2")


def _build_t3(phi: OneInThreeInstance, tau: NetType) -> Built:
    m = phi.m
    b = GadgetBuilder(f"T3_m{phi.m}")
    for j in range(6 * m):
        if j < 3 * m:
            events = ["k", f"z_{j}", f"v_{j}", "k", f"q_{j}", f"z_{j}"]
        else:
            jj = j - 3 * m
            events = ["k", f"w_{jj}", f"p_{jj}", "k", f"y_{jj}", f"w_{jj}"]
        b.path(f"h_{j}", events)
    for j in range(6 * m - 1):
        b.link(f"h_{j}_6", f"r_{j}", f"h_{j + 1}_0")
        b.link(f"h_{j}_6", f"c_{j}", f"h_{j + 1}_6")

    entries = ["h_0_0", b.path("f_0", ["k", "n", "z_0", "k"]).first, b.path("f_1", ["q_0", "k"]).first]
    for j in range(6 * m - 1):
        g = b.gadget(f"g_{j}")
        g.arc(f"g_{j}_0", f"c_{j}", f"g_{j}_1").arc(f"g_{j}_0", "k", f"g_{j}_2")
        g.arc(f"g_{j}_2", f"c_{j}", f"g_{j}_3").arc(f"g_{j}_1", "k", f"g_{j}_3")
        entries.append(g.first)

    for i, clause in enumerate(phi.clauses):
        for n, (xa, xb, xc) in enumerate(_rotations(clause)):
            p = f"t_{i}_{n}"
            t = b.gadget(p)
            t.arc(f"{p}_0", "k", f"{p}_1")
            t.arc(f"{p}_1", f"v_{3 * i + n}", f"{p}_2").arc(f"{p}_1", f"w_{3 * i + n}", f"{p}_5")
            t.arc(f"{p}_2", _var(xa), f"{p}_3").arc(f"{p}_3", _var(xb), f"{p}_4").arc(f"{p}_4", _var(xc), f"{p}_5")
            t.arc(f"{p}_3", f"x_{xa}", f"{p}_2").arc(f"{p}_4", f"x_{xb}", f"{p}_3").arc(f"{p}_5", f"x_{xc}", f"{p}_4")
            entries.append(t.first)

    b.join_bottom(entries)
    return b.build(), EventStateSeparationAtom(event="k", state="h_0_6")


def _clause_and_variable_paths(b: GadgetBuilder, phi: OneInThreeInstance) -> None:
    for i, clause in enumerate(phi.clauses):
        b.path(f"t_{i}", ["k_1", *(_var(x) for x in clause), "k_0"])
    for x in phi.variables:
        b.path(f"b_{x}", [_var(x), "k_0"])


def _build_t4(phi: OneInThreeInstance, tau: NetType) -> Built:
    b = GadgetBuilder(f"T4_m{phi.m}")
    b.path("h_0", ["k_0", "z_0", "o", "k_1", "z_1", "z_0", "o", "k_0"])
    b.path("h_1", ["z_0", "k_0"])
    b.path("h_2", ["z_1", "k_0"])
    b.path("h_3", ["k_0", "k_1"])
    if Interaction.USED in tau:
        b.path("h_4", ["k_1", "z_0", "k_1"])
    _clause_and_variable_paths(b, phi)
    b.concatenate()
    return b.build(), EventStateSeparationAtom(event="k_0", state="h_0_6")


def _build_t5(phi: OneInThreeInstance, tau: NetType) -> Built:
    b = GadgetBuilder(f"T5_m{phi.m}")
    b.path("h_0", ["k_0", "k_1", "z_0", "k_1", "z_1", "k_0"])
    b.path("h_1", ["k_0", "z_0", "k_0"])
    _clause_and_variable_paths(b, phi)
    b.concatenate()
    return b.build(), EventStateSeparationAtom(event="k_0", state="h_0_3")


def _build_t6(phi: OneInThreeInstance, tau: NetType) -> Built:
    b = GadgetBuilder(f"T6_m{phi.m}")
    b.path("h_0", ["k", "y_0", "v", "k"])
    b.path("h_1", ["k", "y_1", "y_0", "k"])
    b.path("h_2", ["k", "y_0", "y_1", "y_0", "k"])
    b.path("h_3", ["y_1", "y_0", "v", "k"])
    b.path("f_0", ["k", "z_0", "v", "k"])
    b.path("f_1", ["k", "z_1", "v", "k"])
    for j in range(11):
        b.path(f"g_{j}", ["k", "z_0", f"u_{j}", "z_1", "k"])
    for i, (x0, x1, x2) in enumerate(phi.clauses):
        X0, X1, X2 = _var(x0), _var(x1), _var(x2)
        b.path(f"t_{i}_0", ["k", "u_0", X0, "u_1", X1, "u_2", X2, "u_3", "k"])
        for n, (first, second) in enumerate([(X0, X1), (X2, X0), (X1, X2)]):
            b.path(f"t_{i}_{n + 1}", ["k", "u_4", "u_5", first, f"w_{3 * i + n}", second, "u_6", "k"])
        for n in range(3):
            b.path(f"t_{i}_{n + 4}", ["k", "u_7", f"w_{3 * i + n}", "u_8", "k"])
    for x in phi.variables:
        b.path(f"b_{x}", [_var(x), "u_9", "u_10", "k"])
    b.concatenate()
    return b.build(), EventStateSeparationAtom(event="k", state="h_0_2")


def _build_t7(phi: OneInThreeInstance, tau: NetType) -> Built:
    b = GadgetBuilder(f"T7_m{phi.m}")
    b.path("h_0", ["k", "v_0"])
    b.path("h_1", ["v_0", "k"])
    b.path("h_2", ["k", "v_0", "v_1", "k"])
    b.path("h_3", ["k", "v_1", "v_0"])
    if tau.members & {Interaction.USED, Interaction.FREE}:
        for n, other in enumerate(["v_0", "y_0", "y_1", "y_2"]):
            b.path(f"h_{4 + 2 * n}", ["k", "x", other, "k"])
            b.path(f"h_{5 + 2 * n}", ["k", other, "x", "k"])
        b.path("h_12", ["k", "y_0", "y_1", "y_2", "k"])
    b.path("f_0", ["k", "z_0", "v_0", "k"])
    b.path("f_1", ["k", "z_1", "v_0", "k"])
    b.path("f_2", ["k", "z_0", "z_1", "z_2", "k"])
    for j in range(14):
        b.path(f"g_{j}", ["k", "z_0", f"u_{j}", "z_1", "k"])
        b.path(f"n_{j}", ["k", "z_2", f"u_{j}", "v_0", "k"])
    for i, (x0, x1, x2) in enumerate(phi.clauses):
        X0, X1, X2 = _var(x0), _var(x1), _var(x2)
        b.path(f"t_{i}_0", ["k", "u_0", X0, "u_1", X1, "u_2", X2, "u_3", "k"])
        for n, (first, second) in enumerate([(X0, X1), (X2, X0), (X1, X2)]):
            b.path(f"t_{i}_{n + 1}", ["k", "u_4", first, f"w_{3 * i + n}", second, "u_5", "u_6", "k"])
        for n in range(3):
            b.path(f"t_{i}_{n + 4}", ["k", "u_7", "u_8", f"w_{3 * i + n}", "u_9", "u_10", "k"])
    for x in phi.variables:
        b.path(f"b_{x}", [_var(x), "u_11", "k"])
    b.concatenate()
    return b.build(), EventStateSeparationAtom(event="k", state="h_3_3")


# ============================================================================
# Families
# ============================================================================

def _types(*members: str) -> NetType:
    return NetType.parse(",".join(members))


def _with_omega(base: Tuple[str, ...], omega: Tuple[str, ...], nonempty: bool = False) -> List[NetType]:
    result = []
    for mask in range(1 if nonempty else 0, 1 << len(omega)):
        extra = [name for bit, name in enumerate(omega) if mask >> bit & 1]
        result.append(_types(*base, *extra))
    return result


class FamilySpec(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: Family
    base_types: Tuple[NetType, ...]
    default_type: Optional[NetType]
    declared_bound: int
    builder: Callable[[OneInThreeInstance, NetType], Built]
    min_clauses: int = 0


FAMILIES: Dict[Family, FamilySpec] = {
    spec.family: spec for spec in [
        FamilySpec(family=Family.T1, declared_bound=2, builder=_build_t1,
                   base_types=(_types("nop", "inp", "free"), _types("nop", "inp", "used", "free")),
                   default_type=_types("nop", "inp", "free")),
        FamilySpec(family=Family.T2, declared_bound=3, builder=_build_t2,
                   base_types=(_types("nop", "set", "res", "used"), _types("nop", "set", "res", "used", "free")),
                   default_type=_types("nop", "set", "res", "used")),
        FamilySpec(family=Family.T3, declared_bound=2, builder=_build_t3, min_clauses=1,
                   base_types=(_types("nop", "inp", "set"), _types("nop", "inp", "set", "used"),
                               *_with_omega(("nop", "inp", "res", "set"), ("out", "used", "free"))),
                   default_type=_types("nop", "inp", "set")),
        FamilySpec(family=Family.T4, declared_bound=1, builder=_build_t4,
                   base_types=tuple(_with_omega(("nop", "inp", "out", "set"), ("used", "free"))),
                   default_type=None),
        FamilySpec(family=Family.T5, declared_bound=1, builder=_build_t5,
                   base_types=(_types("nop", "inp", "set", "free"), _types("nop", "inp", "set", "used", "free")),
                   default_type=_types("nop", "inp", "set", "free")),
        FamilySpec(family=Family.T6, declared_bound=1, builder=_build_t6,
                   base_types=tuple(_with_omega(("nop", "inp", "res", "swap"), ("used", "free"))),
                   default_type=_types("nop", "inp", "res", "swap")),
        FamilySpec(family=Family.T7, declared_bound=1, builder=_build_t7,
                   base_types=tuple(_with_omega(("nop", "inp", "set", "swap"), ("out", "res", "used", "free"))),
                   default_type=_types("nop", "inp", "set", "swap")),
    ]
}

T4_VARIANTS = {
    "set": _types("nop", "inp", "out", "set"),
    "res": _types("nop", "inp", "out", "res"),
}


def family_spec(family) -> FamilySpec:
    try:
        return FAMILIES[Family(str(family).upper())]
    except ValueError:
        raise GadgetError(f"unknown gadget family '{family}' (expected one of T1..T7)") from None


def accepted_types(family) -> List[NetType]:
    """Every type the family's reduction covers: its base types and their FLIP images."""
    spec = family_spec(family)
    result = list(spec.base_types)
    for tau in spec.base_types:
        image = transport(FLIP, tau)
        if image not in result:
            result.append(image)
    return result


def orient(family, tau: NetType) -> Tuple[NetType, bool]:
    """The base type a builder works on and whether ``tau`` is its FLIP image."""
    spec = family_spec(family)
    if tau in spec.base_types:
        return tau, False
    image = transport(FLIP, tau)
    if image in spec.base_types:
        return image, True
    raise GadgetError(f"type {tau} is not covered by family {spec.family}")


def resolve_type(family, tau: Optional[NetType] = None, variant: Optional[str] = None) -> NetType:
    spec = family_spec(family)
    if variant is not None and spec.family != Family.T4:
        raise GadgetError(f"family {spec.family} has no variants")
    if spec.family == Family.T4 and variant is not None:
        if variant not in T4_VARIANTS:
            raise GadgetError(f"unknown T4 variant '{variant}' (expected set or res)")
        if tau is None:
            return T4_VARIANTS[variant]
        if Interaction(variant) not in tau:
            raise GadgetError(f"type {tau} does not match T4 variant '{variant}'")
    if tau is not None:
        return tau
    if spec.default_type is None:
        raise GadgetError(f"family {spec.family} needs a variant (set or res) or an explicit type")
    return spec.default_type


def build_gadget(
    family,
    phi: OneInThreeInstance,
    tau: Optional[NetType] = None,
    variant: Optional[str] = None,
) -> GadgetOutput:
    """Emit A^τ_φ for ``family``.

    Args:
        family: one of T1..T7
        phi: a validated cubic monotone instance
        tau: type to reduce to; defaults to the family's first base type
        variant: T4 only, ``set`` or ``res`` when no type is given

    Raises:
        GadgetError: unknown family, missing T4 variant, type outside the
            family, or an instance too small for the family's gadgets
    """
    spec = family_spec(family)
    tau = resolve_type(spec.family, tau, variant)
    base, flipped = orient(spec.family, tau)
    if phi.m < spec.min_clauses:
        raise GadgetError(f"family {spec.family} needs at least {spec.min_clauses} clause(s)")

    with run_timer(f"build_gadget[{spec.family}]"):
        ts, atom = spec.builder(phi, base)
    ts.require_valid()
    bound = compute_bound(ts)
    if bound > spec.declared_bound:
        raise GadgetError(f"{spec.family} gadget has bound {bound}, expected at most {spec.declared_bound}")
    logger.debug(f"Built {spec.family} for m={phi.m} and {tau}: "
                f"{len(ts.states)} states, {len(ts.events)} events, {len(ts.arcs)} arcs")
    return GadgetOutput(ts=ts, net_type=tau, designated_atom=atom, family=spec.family,
                        declared_bound=spec.declared_bound, flipped=flipped)
