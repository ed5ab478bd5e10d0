"""Shared fixtures: the four small systems, the two reference instances and a TS strategy."""

from typing import Iterator, List, Tuple

import pytest
from hypothesis import strategies as st

from boolsynth.core import NetType, TransitionSystem
from boolsynth.reductions import validate_instance

SAT_CLAUSES = [(0, 1, 2), (0, 2, 3), (0, 1, 3), (2, 4, 5), (1, 4, 5), (3, 4, 5)]
UNSAT_CLAUSES = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


@pytest.fixture
def tau_swap_free():
    return NetType.parse("nop,set,swap,free")


@pytest.fixture
def a1():
    return TransitionSystem.from_arcs("s0", [("s0", "a", "s1"), ("s1", "a", "s2"), ("s2", "a", "s1")], name="a1")


@pytest.fixture
def a2():
    return TransitionSystem.from_arcs("s0", [("s0", "a", "s1"), ("s1", "a", "s2")], name="a2")


@pytest.fixture
def a3():
    return TransitionSystem.from_arcs("s0", [("s0", "a", "s1"), ("s1", "a", "s2"), ("s2", "a", "s2")], name="a3")


@pytest.fixture
def a4():
    return TransitionSystem.from_arcs("s0", [("s0", "a", "s1"), ("s1", "a", "s2"), ("s2", "a", "s3")], name="a4")


@pytest.fixture
def phi_sat():
    return validate_instance(SAT_CLAUSES)


@pytest.fixture
def phi_unsat():
    return validate_instance(UNSAT_CLAUSES)


@pytest.fixture
def phi_empty():
    return validate_instance([])


def path_ts(events: List[str], name: str = "path") -> TransitionSystem:
    arcs = [(f"s{n}", e, f"s{n + 1}") for n, e in enumerate(events)]
    return TransitionSystem.from_arcs("s0", arcs, name=name)


def cycle_ts(events: List[str], name: str = "cycle") -> TransitionSystem:
    n = len(events)
    arcs = [(f"s{t}", e, f"s{(t + 1) % n}") for t, e in enumerate(events)]
    return TransitionSystem.from_arcs("s0", arcs, name=name)


@st.composite
def small_systems(draw, max_states: int = 4, alphabet: Tuple[str, ...] = ("a", "b")) -> TransitionSystem:
    """Deterministic systems on at most ``max_states`` states, cut down to their reachable part."""
    n = draw(st.integers(min_value=1, max_value=max_states))
    states = [f"s{i}" for i in range(n)]
    delta = {}
    for s in states:
        for e in alphabet:
            target = draw(st.one_of(st.none(), st.sampled_from(states)))
            if target is not None:
                delta[(s, e)] = target
    reached, frontier = {"s0"}, ["s0"]
    while frontier:
        s = frontier.pop()
        for e in alphabet:
            t = delta.get((s, e))
            if t is not None and t not in reached:
                reached.add(t)
                frontier.append(t)
    arcs = [(s, e, t) for (s, e), t in delta.items() if s in reached]
    return TransitionSystem.from_arcs("s0", arcs, name="rand", events=alphabet)


@st.composite
def linear_systems(draw, alphabet: Tuple[str, ...] = ("a", "b", "c")) -> TransitionSystem:
    """Simple paths and directed cycles over a small alphabet."""
    events = draw(st.lists(st.sampled_from(alphabet), min_size=1, max_size=5))
    if draw(st.booleans()):
        return cycle_ts(events)
    return path_ts(events)


def _growth_words(length: int, max_letters: int, alphabet: str = "abcdefgh") -> Iterator[List[str]]:
    """Event words with letters introduced in order, so each word is unique up to event renaming."""
    def extend(word: List[int], used: int) -> Iterator[List[int]]:
        if len(word) == length:
            yield word
            return
        for letter in range(min(used + 1, max_letters)):
            yield from extend(word + [letter], max(used, letter + 1))
    for word in extend([], 0):
        yield [alphabet[letter] for letter in word]


def all_linear_systems(max_states: int = 6, max_events: int = 5) -> Iterator[TransitionSystem]:
    """Every simple path and directed cycle on at most ``max_states`` states, up to renaming."""
    for length in range(1, max_states):
        for word in _growth_words(length, max_events):
            yield path_ts(word, name="path_" + "".join(word))
    for length in range(1, max_states + 1):
        for word in _growth_words(length, max_events):
            yield cycle_ts(word, name="cycle_" + "".join(word))


def all_systems(max_states: int = 3, alphabet: Tuple[str, ...] = ("a", "b")) -> Iterator[TransitionSystem]:
    """Every reachable deterministic system on at most ``max_states`` states, up to state renaming.

    Targets of (state, event) pairs are chosen in breadth-first order and a
    new state is always the next unused index, so each system appears once.
    """
    k = len(alphabet)

    def fill(delta: List[Tuple[int, int, int]], n: int, position: int) -> Iterator[TransitionSystem]:
        if position == n * k:
            arcs = [(f"s{s}", alphabet[e], f"s{t}") for s, e, t in delta]
            yield TransitionSystem.from_arcs("s0", arcs, name=f"sys{len(arcs)}")
            return
        s, e = divmod(position, k)
        yield from fill(delta, n, position + 1)
        for target in range(min(n + 1, max_states)):
            yield from fill(delta + [(s, e, target)], max(n, target + 1), position + 1)

    yield from fill([], 1, 0)
