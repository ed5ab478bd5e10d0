"""Instances, the model oracle, gadget construction and the solvability cross-check."""

from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from boolsynth.core import COMPLEXITY_ROWS, FLIP, Interaction, NetType, complexity_row, compute_bound, transport
from boolsynth.errors import GadgetError, InvalidInstanceError, NotAModelError, OracleLimitError
from boolsynth.formats import parse_ts
from boolsynth.reductions import (
    Family,
    GadgetBuilder,
    GadgetVerdict,
    accepted_types,
    brute_force_model,
    build_gadget,
    is_model,
    model_from_region,
    model_to_region,
    orient,
    validate_instance,
    verify_gadget,
)
from boolsynth.regions import EventStateSeparationAtom, Verdict, region_solves, region_valid

from .conftest import SAT_CLAUSES, UNSAT_CLAUSES

I = Interaction
FIXTURES = Path(__file__).parent / "fixtures"


def _disjoint_union(blocks):
    clauses, offset = [], 0
    for block in blocks:
        clauses += [tuple(x + offset for x in clause) for clause in block]
        offset += len(block)
    return validate_instance(clauses)


class TestInstances:
    def test_six_clause_instance_is_valid(self, phi_sat):
        assert phi_sat.m == 6
        assert phi_sat.clauses_of(0) == [0, 1, 2]

    @pytest.mark.parametrize("raw, message, clause", [
        ([(0, 1)], "three variables", 0),
        ([(0, 2, 1), (0, 1, 2), (0, 1, 2)], "not strictly increasing", 0),
        ([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 4)], "out of range", 3),
        ([(0, 1, 2), (0, 1, 2), (0, 1, 2)], "duplicates clause 0", 1),
        ([(0, 1, 2), (0, 1, 3), (0, 2, 3)], "out of range", 1),
        ([(0, 1, 2), (0, 1, 3), (0, 2, 3), (0, 1, 2)], "duplicates clause 0", 3),
    ])
    def test_rejections(self, raw, message, clause):
        with pytest.raises(InvalidInstanceError, match=message) as info:
            validate_instance(raw)
        assert info.value.clause == clause

    def test_non_cubic_rejected(self):
        with pytest.raises(InvalidInstanceError, match="X0 occurs 4 times"):
            validate_instance([(0, 1, 2), (0, 1, 3), (0, 2, 4), (0, 3, 4), (1, 2, 3)])

    def test_booleans_are_not_indices(self):
        with pytest.raises(InvalidInstanceError, match="integers"):
            validate_instance([(False, 1, 2)])

    def test_empty_instance(self, phi_empty):
        assert phi_empty.m == 0
        assert brute_force_model(phi_empty) == frozenset()


class TestOracle:
    def test_least_model(self, phi_sat):
        assert brute_force_model(phi_sat) == frozenset({0, 4})
        assert is_model(phi_sat, {0, 4})
        assert not is_model(phi_sat, {1})
        assert not is_model(phi_sat, {0, 4, 9})

    def test_unsatisfiable(self, phi_unsat):
        assert brute_force_model(phi_unsat) is None

    def test_limit(self):
        phi = _disjoint_union([SAT_CLAUSES] * 5)
        with pytest.raises(OracleLimitError):
            brute_force_model(phi)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.booleans(), min_size=1, max_size=4))
    def test_unions(self, satisfiable_blocks):
        phi = _disjoint_union([SAT_CLAUSES if sat else UNSAT_CLAUSES for sat in satisfiable_blocks])
        model = brute_force_model(phi)
        if all(satisfiable_blocks):
            assert model is not None
            assert is_model(phi, model)
        else:
            assert model is None


class TestGadgetBuilder:
    def test_join_bottom(self):
        b = GadgetBuilder("demo")
        b.path("g", ["a"])
        b.path("h", ["b"])
        b.join_bottom(["g_0", "h_0"])
        ts = b.build()
        assert ts.initial == "bot_0"
        assert set(ts.arcs) == {("g_0", "a", "g_1"), ("h_0", "b", "h_1"), ("bot_0", "ominus_1", "bot_1"),
                                ("bot_0", "oplus_0", "g_0"), ("bot_1", "oplus_1", "h_0")}

    def test_join_bottom_with_loops(self):
        b = GadgetBuilder("demo")
        b.path("g", ["a"])
        b.path("h", ["b"])
        b.join_bottom(["g_0", "h_0"], loops=True)
        arcs = set(b.build().arcs)
        assert {("bot_1", "ominus_1", "bot_1"), ("g_0", "oplus_0", "g_0"), ("h_0", "oplus_1", "h_0")} <= arcs

    def test_concatenate(self):
        b = GadgetBuilder("demo")
        b.path("g", ["a"])
        b.path("h", ["b"])
        b.concatenate()
        ts = b.build()
        assert ts.initial == "g_0"
        assert ("g_1", "ominus_1", "bot_1") in ts.arcs
        assert ("bot_1", "oplus_1", "h_0") in ts.arcs
        assert compute_bound(ts) == 1

    def test_unjoined(self):
        b = GadgetBuilder("demo")
        b.path("g", ["a"])
        with pytest.raises(GadgetError):
            b.build()

    def test_empty_joins(self):
        with pytest.raises(GadgetError):
            GadgetBuilder("demo").join_bottom([])
        with pytest.raises(GadgetError):
            GadgetBuilder("demo").concatenate()


class TestFamilies:
    @pytest.mark.parametrize("family, row", [(f, n) for n, f in enumerate(Family, start=1)])
    def test_accepted_types_are_the_table_row(self, family, row):
        types = set(accepted_types(family))
        assert all(complexity_row(tau).row == row for tau in types)
        assert len(types) == len(next(r for r in COMPLEXITY_ROWS if r.row == row).types)

    def test_orient(self):
        tau = NetType.parse("nop,out,used")
        base, flipped = orient(Family.T1, tau)
        assert flipped
        assert base == NetType.parse("nop,inp,free")
        with pytest.raises(GadgetError):
            orient(Family.T1, NetType.parse("nop,inp,set"))

    def test_unknown_family(self, phi_sat):
        with pytest.raises(GadgetError, match="unknown gadget family"):
            build_gadget("T8", phi_sat)

    def test_t4_needs_variant_or_type(self, phi_sat):
        with pytest.raises(GadgetError, match="variant"):
            build_gadget(Family.T4, phi_sat)

    def test_variant_only_for_t4(self, phi_sat):
        with pytest.raises(GadgetError, match="no variants"):
            build_gadget(Family.T1, phi_sat, variant="set")

    def test_t4_variant_type_mismatch(self, phi_sat):
        with pytest.raises(GadgetError):
            build_gadget(Family.T4, phi_sat, NetType.parse("nop,inp,out,set"), variant="res")

    def test_t3_needs_a_clause(self, phi_empty):
        with pytest.raises(GadgetError, match="at least 1"):
            build_gadget(Family.T3, phi_empty)

    def test_t1_sizes(self, phi_sat):
        gadget = build_gadget(Family.T1, phi_sat)
        ts = gadget.ts
        assert len(ts.states) == 7 * phi_sat.m + 4 == 46
        assert len(ts.events) == 3 * phi_sat.m + 3 == 21
        assert ts.name == "T1_m6"
        assert ts.initial == "bot_0"
        assert gadget.designated_atom.event == "k_1"
        assert gadget.designated_atom.state == "m_0"
        assert not ts.enabled("m_0", "k_1")
        assert compute_bound(ts) == 2
        assert ("t_0_0", "k_0", "t_0_5") in ts.arcs
        assert ("t_0_3", "k_1", "t_0_4") in ts.arcs

    def test_t1_matches_golden_file(self, phi_sat):
        golden = parse_ts((FIXTURES / "t1_six_clauses.ts").read_text(encoding="utf-8"))
        ts = build_gadget(Family.T1, phi_sat).ts
        assert ts.name == golden.name
        assert ts.initial == golden.initial
        assert set(ts.states) == set(golden.states)
        assert set(ts.events) == set(golden.events)
        assert set(ts.arcs) == set(golden.arcs)
        region = model_to_region(Family.T1, phi_sat, {0, 4})
        tau = NetType.parse("nop,inp,free")
        assert region_valid(golden, tau, region)
        assert region_solves(tau, region, EventStateSeparationAtom(event="k_1", state="m_0"))

    def test_t1_empty_instance(self, phi_empty):
        gadget = build_gadget(Family.T1, phi_empty)
        assert set(gadget.ts.states) == {"bot_0", "m_0", "m_1", "m_2"}
        assert compute_bound(gadget.ts) == 1

    def test_flipped_type_builds_the_same_system(self, phi_sat):
        base = build_gadget(Family.T1, phi_sat)
        flipped = build_gadget(Family.T1, phi_sat, transport(FLIP, base.net_type))
        assert flipped.flipped
        assert flipped.ts.arcs == base.ts.arcs
        assert flipped.ts.initial == base.ts.initial
        assert flipped.base_type == base.net_type

    @pytest.mark.slow
    @pytest.mark.parametrize("family, variant", [
        (Family.T2, None), (Family.T3, None), (Family.T4, "set"), (Family.T4, "res"),
        (Family.T5, None), (Family.T6, None), (Family.T7, None),
    ])
    def test_structure(self, phi_sat, family, variant):
        gadget = build_gadget(family, phi_sat, variant=variant)
        assert compute_bound(gadget.ts) <= gadget.declared_bound
        atom = gadget.designated_atom
        assert atom.state in gadget.ts.states
        assert not gadget.ts.enabled(atom.state, atom.event)
        assert all(f"X_{x}" in gadget.ts.events for x in phi_sat.variables)

    @pytest.mark.slow
    def test_t7_extra_gadgets_with_tests(self, phi_sat):
        plain = build_gadget(Family.T7, phi_sat)
        tested = build_gadget(Family.T7, phi_sat, NetType.parse("nop,inp,set,swap,used"))
        assert len(tested.ts.states) > len(plain.ts.states)
        assert "h_12_0" in tested.ts.states and "h_12_0" not in plain.ts.states


class TestModelRegions:
    def test_t1_model_to_region(self, phi_sat):
        gadget = build_gadget(Family.T1, phi_sat)
        region = model_to_region(Family.T1, phi_sat, {0, 4})
        assert region_valid(gadget.ts, gadget.net_type, region)
        assert region_solves(gadget.net_type, region, gadget.designated_atom)
        assert region.signature["X_0"] == I.INP
        assert region.signature["X_1"] == I.NOP
        assert model_from_region(Family.T1, phi_sat, region) == frozenset({0, 4})

    def test_t1_flipped(self, phi_sat):
        tau = NetType.parse("nop,out,used")
        region = model_to_region(Family.T1, phi_sat, {0, 4}, tau=tau)
        assert region.signature["X_0"] == I.OUT
        assert model_from_region(Family.T1, phi_sat, region, tau=tau) == frozenset({0, 4})

    def test_not_a_model(self, phi_sat):
        with pytest.raises(NotAModelError):
            model_to_region(Family.T1, phi_sat, {1})

    @pytest.mark.slow
    @pytest.mark.parametrize("family, variant", [
        (Family.T2, None), (Family.T3, None), (Family.T4, "set"), (Family.T5, None),
        (Family.T6, None), (Family.T7, None),
    ])
    def test_round_trip_all_families(self, phi_sat, family, variant):
        gadget = build_gadget(family, phi_sat, variant=variant)
        region = model_to_region(family, phi_sat, {0, 4}, variant=variant)
        assert region_valid(gadget.ts, gadget.net_type, region)
        assert region_solves(gadget.net_type, region, gadget.designated_atom)
        assert model_from_region(family, phi_sat, region, variant=variant) == frozenset({0, 4})


class TestVerifyGadget:
    def test_unsatisfiable_instance(self, phi_unsat):
        result = verify_gadget(Family.T1, phi_unsat)
        assert result.verdict == GadgetVerdict.CONFIRMED_NEGATIVE
        assert result.solver == Verdict.UNSOLVABLE
        assert result.model is None

    def test_empty_instance(self, phi_empty):
        result = verify_gadget(Family.T1, phi_empty)
        assert result.verdict == GadgetVerdict.CONFIRMED_POSITIVE
        assert result.model == frozenset()

    def test_tiny_budget_is_inconclusive(self, phi_sat):
        result = verify_gadget(Family.T1, phi_sat, budget=1)
        assert result.verdict == GadgetVerdict.INCONCLUSIVE

    @pytest.mark.slow
    def test_satisfiable_instance(self, phi_sat):
        result = verify_gadget(Family.T1, phi_sat)
        assert result.verdict == GadgetVerdict.CONFIRMED_POSITIVE
        assert result.model == frozenset({0, 4})
