"""
Cubic monotone one-in-three 3SAT instances and a brute-force model oracle.
"""

from collections import Counter
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..errors import InvalidInstanceError, OracleLimitError
from ..utils import get_logger

logger = get_logger(__name__)

ORACLE_LIMIT = 24

Clause = Tuple[int, int, int]


class OneInThreeInstance(BaseModel):
    """φ = {ζ_0, ..., ζ_{m-1}} over the variables X_0, ..., X_{m-1}."""

    model_config = ConfigDict(frozen=True)

    clauses: Tuple[Clause, ...] = Field(default=(), description="Strictly increasing variable triples")

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def variables(self) -> List[int]:
        return list(range(self.m))

    def clauses_of(self, variable: int) -> List[int]:
        return [n for n, clause in enumerate(self.clauses) if variable in clause]


def validate_instance(raw: Iterable[Sequence[int]]) -> OneInThreeInstance:
    """Accept exactly the cubic monotone ordered-triple instances.

    Raises:
        InvalidInstanceError: naming the failed invariant and, where it
            applies, the offending clause index
    """
    clauses: List[Clause] = []
    for n, clause in enumerate(raw):
        items = list(clause)
        if len(items) != 3:
            raise InvalidInstanceError(f"expected three variables, got {len(items)}", clause=n)
        if any(isinstance(x, bool) or not isinstance(x, int) for x in items):
            raise InvalidInstanceError("variable indices must be integers", clause=n)
        if not items[0] < items[1] < items[2]:
            raise InvalidInstanceError(f"triple {tuple(items)} is not strictly increasing", clause=n)
        clauses.append((items[0], items[1], items[2]))

    m = len(clauses)
    seen = {}
    for n, clause in enumerate(clauses):
        if clause[0] < 0 or clause[2] >= m:
            raise InvalidInstanceError(f"variable index out of range 0..{m - 1}", clause=n)
        if clause in seen:
            raise InvalidInstanceError(f"duplicates clause {seen[clause]}", clause=n)
        seen[clause] = n

    occurrences = Counter(x for clause in clauses for x in clause)
    for variable in range(m):
        if occurrences[variable] != 3:
            first = next((n for n, c in enumerate(clauses) if variable in c), None)
            raise InvalidInstanceError(
                f"X{variable} occurs {occurrences[variable]} times, a cubic instance needs 3", clause=first)
    return OneInThreeInstance(clauses=tuple(clauses))


def is_model(phi: OneInThreeInstance, model: Iterable[int]) -> bool:
    """True iff ``model`` meets every clause in exactly one variable."""
    chosen: Set[int] = set(model)
    if any(x < 0 or x >= phi.m for x in chosen):
        return False
    return all(sum(1 for x in clause if x in chosen) == 1 for clause in phi.clauses)


def brute_force_model(phi: OneInThreeInstance) -> Optional[FrozenSet[int]]:
    """The lexicographically least one-in-three model of ``phi``, or ``None``.

    Variables are decided in index order with X_i taken before it is left
    out, so the first complete assignment found is the least sorted model.

    Raises:
        OracleLimitError: when m exceeds the enumeration guard
    """
    if phi.m > ORACLE_LIMIT:
        raise OracleLimitError(f"instance has {phi.m} variables, the oracle handles at most {ORACLE_LIMIT}")

    clauses_of = [phi.clauses_of(x) for x in range(phi.m)]
    hits = [0] * phi.m
    open_slots = [3] * phi.m
    chosen: List[int] = []

    def assign(x: int, value: int) -> bool:
        ok = True
        for n in clauses_of[x]:
            hits[n] += value
            open_slots[n] -= 1
            if hits[n] > 1 or (open_slots[n] == 0 and hits[n] != 1):
                ok = False
        return ok

    def undo(x: int, value: int) -> None:
        for n in clauses_of[x]:
            hits[n] -= value
            open_slots[n] += 1

    def search(x: int) -> bool:
        if x == phi.m:
            return True
        for value in (1, 0):
            if assign(x, value):
                if value:
                    chosen.append(x)
                if search(x + 1):
                    return True
                if value:
                    chosen.pop()
            undo(x, value)
        return False

    if search(0):
        logger.debug(f"Oracle found model {sorted(chosen)} for m={phi.m}")
        return frozenset(chosen)
    logger.debug(f"Oracle: no one-in-three model for m={phi.m}")
    return None
