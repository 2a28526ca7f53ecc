"""Fixpoints of monotone set operators over a finite universe.

Both the concept evaluator and the mu-calculus evaluator delegate here, so the
two semantics share one iteration engine.
"""
from __future__ import annotations

from itertools import chain, combinations
from typing import Callable, FrozenSet, List, Tuple

from .errors import DomainTooLarge, NonMonotoneOperator

MU = "mu"
NU = "nu"


def kleene(
    kind: str,
    step: Callable[[FrozenSet], FrozenSet],
    universe: FrozenSet,
    check: bool = False,
) -> Tuple[FrozenSet, List[FrozenSet]]:
    """Iterate ``step`` from the empty set (mu) or the universe (nu).

    Returns the fixpoint and the list of approximants visited, starting with
    the initial one and without repeating the final value.  With ``check``
    the chain is verified to be increasing (mu) or decreasing (nu).
    """
    if kind not in (MU, NU):
        raise ValueError(f"unknown fixpoint kind {kind!r}")
    current = frozenset() if kind == MU else frozenset(universe)
    trace = [current]
    while True:
        nxt = frozenset(step(current))
        if nxt == current:
            return current, trace
        if check and not (current <= nxt if kind == MU else nxt <= current):
            raise NonMonotoneOperator(
                f"{kind}-approximants are not a chain: {sorted(current)} then {sorted(nxt)}"
            )
        current = nxt
        trace.append(current)
        if len(trace) > len(universe) + 1:
            raise NonMonotoneOperator("iteration did not stabilise; operator is not monotone")


def all_subsets(universe):
    items = sorted(universe)
    return (
        frozenset(c)
        for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))
    )


def tarski(
    kind: str,
    step: Callable[[FrozenSet], FrozenSet],
    universe: FrozenSet,
    cap: int = 4,
) -> FrozenSet:
    """Least fixpoint as the meet of all pre-fixpoints, greatest as the join of
    all post-fixpoints, by exhaustive enumeration of subsets."""
    if len(universe) > cap:
        raise DomainTooLarge(f"{len(universe)} elements exceeds brute-force cap {cap}")
    universe = frozenset(universe)
    if kind == MU:
        out = universe
        for e in all_subsets(universe):
            if step(e) <= e:
                out &= e
        return out
    if kind == NU:
        out = frozenset()
        for e in all_subsets(universe):
            if e <= step(e):
                out |= e
        return out
    raise ValueError(f"unknown fixpoint kind {kind!r}")
