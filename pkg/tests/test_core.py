"""Interactions, types, transition systems, isomorphisms and the complexity table."""

import pytest
from hypothesis import given, strategies as st

from boolsynth.core import (
    COMPLEXITY_ROWS,
    FLIP,
    IDENTITY,
    INTERACTION_ORDER,
    ComplexityClass,
    Interaction,
    NetType,
    Region,
    TransitionSystem,
    classify_complexity,
    complexity_row,
    compute_bound,
    interaction_apply,
    parse_interactions,
    transport,
    transport_region,
    type_step,
    validate_ts,
)
from boolsynth.errors import InvalidTransitionSystemError, IsomorphismError
from boolsynth.regions import StateSeparationAtom, region_solves, region_valid


class TestInteractions:
    @pytest.mark.parametrize("name, at0, at1", [
        ("nop", 0, 1), ("inp", None, 0), ("out", 1, None), ("set", 1, 1),
        ("res", 0, 0), ("swap", 1, 0), ("used", None, 1), ("free", 0, None),
    ])
    def test_table(self, name, at0, at1):
        i = Interaction(name)
        assert interaction_apply(i, 0) == at0
        assert interaction_apply(i, 1) == at1

    def test_rejects_non_boolean_state(self):
        with pytest.raises(ValueError):
            interaction_apply(Interaction.NOP, 2)

    def test_parse_accepts_braces_and_drops_duplicates(self):
        assert parse_interactions("{nop, inp ,inp,free}") == [Interaction.NOP, Interaction.INP, Interaction.FREE]

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError, match="unknown interaction"):
            parse_interactions("nop,toggle")


class TestNetType:
    def test_step_is_undefined_outside_the_type(self):
        tau = NetType.parse("nop,inp")
        assert type_step(tau, 1, Interaction.INP) == 0
        assert type_step(tau, 0, Interaction.SET) is None

    def test_empty_type_rejected(self):
        with pytest.raises(ValueError):
            NetType(members=frozenset())

    def test_all_with_nop(self):
        types = NetType.all_with_nop()
        assert len(types) == 128
        assert len(set(types)) == 128
        assert all(Interaction.NOP in t for t in types)

    def test_spec_round_trip(self):
        tau = NetType.parse("free,nop,inp")
        assert tau.spec() == "nop,inp,free"
        assert NetType.parse(tau.spec()) == tau
        assert str(tau) == "{nop,inp,free}"


class TestTransitionSystem:
    def test_from_arcs_infers_states_and_events(self, a1):
        assert a1.states == ("s0", "s1", "s2")
        assert a1.events == ("a",)
        assert a1.successor("s2", "a") == "s1"
        assert not a1.enabled("s0", "b")

    def test_duplicate_arcs_dropped(self):
        ts = TransitionSystem.from_arcs("s0", [("s0", "a", "s1"), ("s0", "a", "s1")])
        assert len(ts.arcs) == 1

    def test_nondeterminism_reported(self):
        ts = TransitionSystem.from_arcs("s0", [("s0", "a", "s1"), ("s0", "a", "s2")])
        report = validate_ts(ts)
        assert not report.is_valid
        assert report.of_kind("determinism")[0].subject == "s0,a"
        with pytest.raises(InvalidTransitionSystemError):
            ts.require_valid()

    def test_unreachable_state_reported(self):
        ts = TransitionSystem.from_arcs("s0", [("s0", "a", "s1"), ("s2", "b", "s1")])
        report = validate_ts(ts)
        assert [v.subject for v in report.of_kind("reachability")] == ["s2"]

    def test_undeclared_initial_reported(self):
        ts = TransitionSystem(states=("s0",), events=(), initial="q")
        assert validate_ts(ts).of_kind("undeclared")

    def test_bfs_orders(self):
        ts = TransitionSystem.from_arcs("s0", [("s0", "b", "s2"), ("s0", "a", "s1"), ("s1", "c", "s3")],
                                        events=("z",))
        assert ts.bfs_order() == ["s0", "s2", "s1", "s3"]
        assert ts.bfs_event_order() == ["b", "a", "c", "z"]

    @pytest.mark.parametrize("arcs, bound", [
        ([], 0),
        ([("s0", "a", "s1")], 1),
        ([("s0", "a", "s1"), ("s0", "b", "s2")], 2),
        ([("s0", "a", "s0"), ("s0", "b", "s1"), ("s1", "c", "s0")], 2),
    ])
    def test_compute_bound(self, arcs, bound):
        assert compute_bound(TransitionSystem.from_arcs("s0", arcs)) == bound


class TestIsomorphisms:
    def test_flip_is_an_isomorphism_of_every_type(self):
        for tau in NetType.all_with_nop():
            image = transport(FLIP, tau)
            assert len(image) == len(tau)
            assert transport(FLIP, image) == tau

    def test_identity_check(self):
        IDENTITY.check(NetType.parse("nop,inp,out,set,res,swap,used,free"))

    def test_broken_mapping_rejected(self):
        broken = FLIP.model_copy(update={"interaction_map": {**FLIP.interaction_map,
                                                             Interaction.SET: Interaction.SET,
                                                             Interaction.RES: Interaction.RES}})
        with pytest.raises(IsomorphismError):
            broken.check(NetType.parse("nop,set"))

    @given(st.sampled_from(INTERACTION_ORDER), st.sampled_from([0, 1]))
    def test_flip_commutes_with_application(self, i, x):
        y = interaction_apply(i, x)
        y_image = interaction_apply(FLIP.map_interaction(i), FLIP.state_map[x])
        assert (y is None) == (y_image is None)
        if y is not None:
            assert FLIP.state_map[y] == y_image

    def test_transport_region(self):
        region = Region(support={"s0": 1, "s1": 0}, signature={"a": Interaction.INP})
        image = transport_region(FLIP, region)
        assert image.support == {"s0": 0, "s1": 1}
        assert image.signature == {"a": Interaction.OUT}
        assert transport_region(FLIP.inverse(), image) == region

    def test_flipped_swap_types(self):
        assert transport(FLIP, NetType.parse("nop,out,res,swap,free")) == NetType.parse("nop,inp,set,swap,used")
        assert transport(FLIP, NetType.parse("nop,set,swap,free")) == NetType.parse("nop,res,swap,used")

    def test_transported_region_keeps_separating(self, a1, tau_swap_free):
        region = Region(support={"s0": 1, "s1": 0, "s2": 1}, signature={"a": Interaction.SWAP})
        image = transport_region(FLIP, region)
        tau = transport(FLIP, tau_swap_free)
        assert image == Region(support={"s0": 0, "s1": 1, "s2": 0}, signature={"a": Interaction.SWAP})
        for r, t in ((region, tau_swap_free), (image, tau)):
            assert region_valid(a1, t, r)
            assert region_solves(t, r, StateSeparationAtom(state="s0", other="s1"))
            assert region_solves(t, r, StateSeparationAtom(state="s2", other="s1"))


class TestComplexity:
    @pytest.mark.parametrize("spec, g, expected", [
        ("nop,inp,free", 1, ComplexityClass.POLYNOMIAL),
        ("nop,inp,free", 2, ComplexityClass.NP_COMPLETE),
        ("nop,set,res,used", 2, ComplexityClass.POLYNOMIAL),
        ("nop,set,res,used", 3, ComplexityClass.NP_COMPLETE),
        ("nop,inp,set", 2, ComplexityClass.NP_COMPLETE),
        ("nop,inp,out,set", 0, ComplexityClass.POLYNOMIAL),
        ("nop,inp,out,set", 1, ComplexityClass.NP_COMPLETE),
        ("nop,set,swap,free", 1, ComplexityClass.POLYNOMIAL),
        ("nop,set,swap,free", 2, ComplexityClass.NP_COMPLETE),
        ("nop,inp", None, ComplexityClass.POLYNOMIAL),
        ("nop,swap,used", None, ComplexityClass.POLYNOMIAL),
        ("inp,out", 3, ComplexityClass.OUT_OF_TABLE),
    ])
    def test_classify(self, spec, g, expected):
        assert classify_complexity(NetType.parse(spec), g) == expected

    def test_unbounded_means_np_for_thresholded_rows(self):
        assert classify_complexity(NetType.parse("nop,inp,set"), None) == ComplexityClass.NP_COMPLETE

    def test_negative_bound_rejected(self):
        with pytest.raises(ValueError):
            classify_complexity(NetType.parse("nop"), -1)

    def test_rows_partition_the_nop_types(self):
        rows = [complexity_row(tau) for tau in NetType.all_with_nop()]
        assert all(row is not None for row in rows)
        assert sum(len(row.types) for row in COMPLEXITY_ROWS) == 128

    def test_flip_preserves_the_row(self):
        for tau in NetType.all_with_nop():
            assert complexity_row(transport(FLIP, tau)).row == complexity_row(tau).row
