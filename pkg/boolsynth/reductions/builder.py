"""
Assembly helper for reduction gadgets and the two joining schemes.

Gadgets are recorded as arc lists on flat state names (``h_0_3``,
``t_2_1_4``, ``bot_5``). ``join_bottom`` hangs every gadget off a chain of
``bot_j`` states through fresh ``ominus_j``/``oplus_j`` events;
``concatenate`` strings path gadgets together through one ``bot_j`` each.
"""

from typing import List, Optional, Sequence, Tuple

from ..core import Arc, TransitionSystem
from ..errors import GadgetError


class Gadget:
    """One named sub-system: its states in creation order and its arcs."""

    def __init__(self, name: str):
        self.name = name
        self.states: List[str] = []
        self.arcs: List[Arc] = []

    @property
    def first(self) -> str:
        return self.states[0]

    @property
    def last(self) -> str:
        return self.states[-1]

    def state(self, name: str) -> str:
        if name not in self.states:
            self.states.append(name)
        return name

    def arc(self, src: str, event: str, dst: str) -> "Gadget":
        self.state(src)
        self.state(dst)
        self.arcs.append((src, event, dst))
        return self

    def loop(self, state: str, *events: str) -> "Gadget":
        for event in events:
            self.arc(state, event, state)
        return self


class GadgetBuilder:
    """Collects gadgets in order and joins them into one transition system."""

    def __init__(self, name: str):
        self.name = name
        self.gadgets: List[Gadget] = []
        self.arcs: List[Arc] = []
        self._initial: Optional[str] = None

    def gadget(self, name: str) -> Gadget:
        gadget = Gadget(name)
        self.gadgets.append(gadget)
        return gadget

    def path(self, prefix: str, events: Sequence[str]) -> Gadget:
        """A directed path ``prefix_0 -e1-> prefix_1 ... -en-> prefix_n``."""
        gadget = self.gadget(prefix)
        gadget.state(f"{prefix}_0")
        for n, event in enumerate(events):
            gadget.arc(f"{prefix}_{n}", event, f"{prefix}_{n + 1}")
        return gadget

    def link(self, src: str, event: str, dst: str) -> None:
        """An arc between two gadgets."""
        self.arcs.append((src, event, dst))

    def join_bottom(self, entries: Sequence[str], loops: bool = False) -> None:
        """Connect ``bot_j -oplus_j-> entries[j]`` along ``bot_j -ominus_{j+1}-> bot_{j+1}``.

        With ``loops`` every ``bot_{j+1}`` carries an ``ominus_{j+1}`` loop and
        every entry an ``oplus_j`` loop.
        """
        if not entries:
            raise GadgetError("bottom joining needs at least one gadget entry")
        for j, entry in enumerate(entries):
            bottom = f"bot_{j}"
            if j + 1 < len(entries):
                self.arcs.append((bottom, f"ominus_{j + 1}", f"bot_{j + 1}"))
                if loops:
                    self.arcs.append((f"bot_{j + 1}", f"ominus_{j + 1}", f"bot_{j + 1}"))
            self.arcs.append((bottom, f"oplus_{j}", entry))
            if loops:
                self.arcs.append((entry, f"oplus_{j}", entry))
        self._initial = "bot_0"

    def concatenate(self) -> None:
        """``A_0 -ominus_1-> bot_1 -oplus_1-> A_1 ... -ominus_n-> bot_n -oplus_n-> A_n``."""
        if not self.gadgets:
            raise GadgetError("concatenation needs at least one gadget")
        for j in range(1, len(self.gadgets)):
            bottom = f"bot_{j}"
            self.arcs.append((self.gadgets[j - 1].last, f"ominus_{j}", bottom))
            self.arcs.append((bottom, f"oplus_{j}", self.gadgets[j].first))
        self._initial = self.gadgets[0].first

    def build(self) -> TransitionSystem:
        if self._initial is None:
            raise GadgetError(f"gadgets of {self.name} were never joined")
        gadget_arcs: List[Arc] = [arc for g in self.gadgets for arc in g.arcs]
        states: Tuple[str, ...] = tuple(s for g in self.gadgets for s in g.states)
        return TransitionSystem.from_arcs(self._initial, gadget_arcs + self.arcs,
                                          name=self.name, states=states)
