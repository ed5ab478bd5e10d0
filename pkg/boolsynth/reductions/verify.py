"""
Models to regions and back, and the solvability/satisfiability cross-check.
"""

from enum import Enum
from typing import Dict, FrozenSet, Iterable, Optional

from pydantic import BaseModel, Field

from ..core import FLIP, Interaction, NetType, Region, transport_region
from ..errors import GadgetError, NotAModelError
from ..regions import (
    DEFAULT_BUDGET,
    SolveStatus,
    Verdict,
    decide_solvable,
    extend_region,
    region_solves,
    region_valid,
    solve_atom,
)
from ..utils import get_logger
from .families import Family, GadgetOutput, build_gadget, family_spec, orient, resolve_type
from .instances import OneInThreeInstance, brute_force_model, is_model

logger = get_logger(__name__)

INP, OUT, SET, RES = Interaction.INP, Interaction.OUT, Interaction.SET, Interaction.RES
SWAP, USED, FREE, NOP = Interaction.SWAP, Interaction.USED, Interaction.FREE, Interaction.NOP


class GadgetVerdict(str, Enum):
    CONFIRMED_POSITIVE = "confirmed-positive"
    CONFIRMED_NEGATIVE = "confirmed-negative"
    REFUTED = "refuted"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


class GadgetVerification(BaseModel):
    verdict: GadgetVerdict
    family: Family
    model: Optional[FrozenSet[int]] = Field(None, description="Oracle model, if φ has one")
    solver: Verdict
    nodes: int = 0


# ============================================================================
# Signature recipes
# ============================================================================

def _variables(phi: OneInThreeInstance, model: FrozenSet[int], inside: Interaction) -> Dict[str, Interaction]:
    return {f"X_{x}": (inside if x in model else NOP) for x in phi.variables}


def _recipe(gadget: GadgetOutput, phi: OneInThreeInstance, model: FrozenSet[int]) -> Dict[str, Interaction]:
    """Signatures the α-solving region of ``model`` takes, in the base orientation.

    Events left out are fitted by the region search.
    """
    events = gadget.ts.events
    family = gadget.family
    if family == Family.T1:
        sig = {e: NOP for e in events}
        sig.update(k_0=INP, k_1=FREE)
        sig.update(_variables(phi, model, INP))
        return sig
    if family == Family.T2:
        sig = {e: NOP for e in events if e.startswith("z_")}
        sig.update(k_0=USED, k_1=RES)
        sig.update(_variables(phi, model, RES))
        for i, clause in enumerate(phi.clauses):
            for j, x in enumerate(clause):
                sig[f"y_{3 * i + j}"] = SET if x in model else NOP
        return sig
    if family == Family.T3:
        return {"k": INP, **_variables(phi, model, INP)}
    if family == Family.T4:
        return {"k_0": OUT, "k_1": SET, "o": INP, **_variables(phi, model, INP)}
    if family == Family.T5:
        return {"k_0": FREE, "k_1": SET, **_variables(phi, model, INP)}
    swaps = {e: SWAP for e in events if e.startswith("u_")}
    if family == Family.T6:
        return {"k": INP, "v": SWAP, "y_0": NOP, "y_1": SWAP, **swaps, **_variables(phi, model, SWAP)}
    return {"k": INP, "v_0": SWAP, **swaps, **_variables(phi, model, SWAP)}


# ============================================================================
# Operations
# ============================================================================

def model_to_region(
    family,
    phi: OneInThreeInstance,
    model: Iterable[int],
    tau: Optional[NetType] = None,
    variant: Optional[str] = None,
    budget: int = DEFAULT_BUDGET,
) -> Region:
    """The α-solving region of A^τ_φ that encodes the one-in-three model ``model``.

    Raises:
        NotAModelError: ``model`` is not a one-in-three model of ``phi``
        GadgetError: the family's signature recipe does not extend to a region
    """
    model = frozenset(model)
    if not is_model(phi, model):
        raise NotAModelError(f"{sorted(model)} is not a one-in-three model of the instance")

    gadget = build_gadget(family, phi, tau, variant)
    ts, tau, atom = gadget.ts, gadget.net_type, gadget.designated_atom
    pinned = _recipe(gadget, phi, model)
    if gadget.flipped:
        pinned = {e: FLIP.map_interaction(i) for e, i in pinned.items()}

    region = None
    if all(e in pinned for e in ts.events):
        for sup_init in (0, 1):
            candidate = extend_region(ts, tau, sup_init, pinned)
            if candidate is not None and region_solves(tau, candidate, atom):
                region = candidate
                break
    else:
        outcome = solve_atom(ts, tau, atom, budget=budget, fixed=pinned)
        if outcome.status == SolveStatus.BUDGET_EXHAUSTED:
            raise GadgetError(f"budget of {budget} nodes exhausted fitting the {gadget.family} region")
        region = outcome.region

    if region is None or not region_valid(ts, tau, region) or not region_solves(tau, region, atom):
        raise GadgetError(f"the {gadget.family} recipe for {sorted(model)} does not extend to a region solving {atom}")
    logger.debug(f"Region for model {sorted(model)} solves {atom} in {ts.name}")
    return region


def model_from_region(
    family,
    phi: OneInThreeInstance,
    region: Region,
    tau: Optional[NetType] = None,
    variant: Optional[str] = None,
) -> FrozenSet[int]:
    """Read the variables off a region solving α: {X | sig(X) ≠ nop} in the base orientation."""
    spec = family_spec(family)
    _, flipped = orient(spec.family, resolve_type(spec.family, tau, variant))
    if flipped:
        region = transport_region(FLIP, region)
    missing = [x for x in phi.variables if f"X_{x}" not in region.signature]
    if missing:
        raise GadgetError(f"region does not sign X_{missing[0]}")
    return frozenset(x for x in phi.variables if region.signature[f"X_{x}"] != NOP)


def verify_gadget(
    family,
    phi: OneInThreeInstance,
    budget: int = DEFAULT_BUDGET,
    tau: Optional[NetType] = None,
    variant: Optional[str] = None,
    progress: bool = False,
) -> GadgetVerification:
    """Check that A^τ_φ is τ-solvable exactly when φ has a one-in-three model.

    The designated atom is tried first; when it fails the gadget is
    unsolvable without searching the remaining atoms.
    """
    gadget = build_gadget(family, phi, tau, variant)
    model = brute_force_model(phi)

    outcome = solve_atom(gadget.ts, gadget.net_type, gadget.designated_atom, budget=budget)
    nodes = outcome.nodes
    if outcome.status == SolveStatus.UNSOLVABLE:
        solver = Verdict.UNSOLVABLE
    elif outcome.status == SolveStatus.BUDGET_EXHAUSTED:
        solver = Verdict.INCONCLUSIVE
    else:
        decision = decide_solvable(gadget.ts, gadget.net_type, budget=budget, progress=progress)
        solver = decision.verdict
        nodes += decision.nodes

    if solver == Verdict.INCONCLUSIVE:
        verdict = GadgetVerdict.INCONCLUSIVE
    elif (solver == Verdict.SOLVABLE) == (model is not None):
        verdict = GadgetVerdict.CONFIRMED_POSITIVE if model is not None else GadgetVerdict.CONFIRMED_NEGATIVE
    else:
        verdict = GadgetVerdict.REFUTED
        logger.error(f"{gadget.family} disagrees with the oracle: solver says {solver}, "
                     f"oracle model {sorted(model) if model is not None else None}")
    logger.debug(f"verify_gadget[{gadget.family}, m={phi.m}]: {verdict}")
    return GadgetVerification(verdict=verdict, family=gadget.family, model=model, solver=solver, nodes=nodes)
