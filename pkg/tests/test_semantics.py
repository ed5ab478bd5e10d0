"""Firing rule, reachability graphs and TS isomorphism."""

import pytest

from boolsynth.core import Interaction, NetType, TransitionSystem
from boolsynth.errors import ReachabilityCapExceeded, UnknownTransitionError
from boolsynth.semantics import BooleanNet, fire, reachability_graph, ts_isomorphic

I = Interaction


@pytest.fixture
def toggle_net():
    # p flips on every a; b only fires once p is set
    return BooleanNet(
        name="toggle",
        net_type=NetType.parse("nop,swap,used"),
        places=("p",),
        transitions=("a", "b"),
        initial_marking={"p": 0},
        flow={"p": {"a": I.SWAP, "b": I.USED}},
    )


class TestBooleanNet:
    def test_omitted_flows_are_nop(self, toggle_net):
        assert toggle_net.flow_of("p", "a") == I.SWAP
        assert toggle_net.flow_of("p", "zzz") == I.NOP

    def test_flow_outside_type_rejected(self):
        with pytest.raises(ValueError, match="not in type"):
            BooleanNet(net_type=NetType.parse("nop,inp"), places=("p",), transitions=("a",),
                       initial_marking={"p": 1}, flow={"p": {"a": I.SET}})

    def test_nop_free_type_needs_total_flow(self):
        with pytest.raises(ValueError, match="lacks nop"):
            BooleanNet(net_type=NetType.parse("inp,out"), places=("p",), transitions=("a", "b"),
                       initial_marking={"p": 1}, flow={"p": {"a": I.INP}})

    def test_marking_must_cover_places(self):
        with pytest.raises(ValueError):
            BooleanNet(net_type=NetType.parse("nop"), places=("p", "q"), transitions=(),
                       initial_marking={"p": 1})


class TestFire:
    def test_enabled_and_disabled(self, toggle_net):
        assert fire(toggle_net, {"p": 0}, "a") == {"p": 1}
        assert fire(toggle_net, {"p": 0}, "b") is None
        assert fire(toggle_net, {"p": 1}, "b") == {"p": 1}

    def test_unknown_transition(self, toggle_net):
        with pytest.raises(UnknownTransitionError):
            fire(toggle_net, {"p": 0}, "c")


class TestReachabilityGraph:
    def test_toggle(self, toggle_net):
        graph = reachability_graph(toggle_net)
        ts = graph.ts
        assert ts.name == "rg_toggle"
        assert ts.states == ("m0", "m1")
        assert set(ts.arcs) == {("m0", "a", "m1"), ("m1", "a", "m0"), ("m1", "b", "m1")}
        assert graph.markings == {"m0": {"p": 0}, "m1": {"p": 1}}

    def test_cap(self):
        net = BooleanNet(net_type=NetType.parse("nop,swap"), places=("p", "q"), transitions=("a", "b"),
                         initial_marking={"p": 0, "q": 0},
                         flow={"p": {"a": I.SWAP}, "q": {"b": I.SWAP}})
        assert len(reachability_graph(net, cap=4).ts.states) == 4
        with pytest.raises(ReachabilityCapExceeded) as info:
            reachability_graph(net, cap=3)
        assert info.value.cap == 3

    def test_placeless_net_loops_everything(self):
        net = BooleanNet(net_type=NetType.parse("nop"), transitions=("a",))
        ts = reachability_graph(net).ts
        assert ts.arcs == (("m0", "a", "m0"),)


class TestIsomorphism:
    def test_renamed_system_is_isomorphic(self, a1):
        renamed = TransitionSystem.from_arcs("q0", [("q0", "a", "q1"), ("q1", "a", "q2"), ("q2", "a", "q1")])
        assert ts_isomorphic(a1, renamed) == {"s0": "q0", "s1": "q1", "s2": "q2"}

    def test_different_shapes(self, a1, a2, a3):
        assert ts_isomorphic(a1, a2) is None
        assert ts_isomorphic(a1, a3) is None

    def test_labels_matter(self, a2):
        relabelled = TransitionSystem.from_arcs("s0", [("s0", "a", "s1"), ("s1", "b", "s2")])
        assert ts_isomorphic(a2, relabelled) is None
