"""Random concepts and interpretations for property tests and the CLI suite.

All functions take an explicit ``random.Random`` so runs are reproducible
from a seed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from . import syntax as s
from .models import Interpretation, Signature, canonical_domain


@dataclass(frozen=True)
class ConceptShape:
    concepts: Sequence[str] = ("a", "b")
    roles: Sequence[str] = ("r", "s")
    depth: int = 3
    numbers: bool = True
    fixpoints: bool = True
    max_n: int = 3


def random_concept(
    rng: random.Random,
    shape: ConceptShape = ConceptShape(),
    free: Sequence[str] = (),
    positive: Sequence[str] = (),
) -> s.Concept:
    """A well-formed concept of depth at most ``shape.depth``.

    Bound variables are only placed under an even number of negations
    (counting the qualifier of ``atmost`` as one).  The names in ``free`` may
    occur free anywhere; those in ``positive`` only in positive positions.
    Binders are named ``X1, X2, ...``.
    """
    counter = [0]
    return _gen(rng, shape, shape.depth, {x: 0 for x in positive}, tuple(free), counter)


def _leaf(rng, shape, env, free):
    usable = [x for x, parity in env.items() if parity == 0] + list(free)
    options = ["atomic"] * 4 + ["top", "bot"]
    if usable:
        options += ["var"] * 6
    pick = rng.choice(options)
    if pick == "atomic":
        return s.Atomic(rng.choice(list(shape.concepts)))
    if pick == "top":
        return s.TOP
    if pick == "bot":
        return s.BOT
    return s.Var(rng.choice(usable))


def _flip(env):
    return {x: 1 - p for x, p in env.items()}


def _gen(rng, shape, depth, env, free, counter):
    if depth <= 0 or rng.random() < 0.1:
        return _leaf(rng, shape, env, free)
    kinds = ["not", "and", "or", "exists", "forall"]
    if shape.numbers:
        kinds += ["atleast", "atmost"]
    if shape.fixpoints:
        kinds += ["mu", "nu"]
    kind = rng.choice(kinds)
    d = depth - 1
    if kind == "not":
        return s.Not(_gen(rng, shape, d, _flip(env), free, counter))
    if kind in ("and", "or"):
        cls = s.And if kind == "and" else s.Or
        return cls(_gen(rng, shape, d, env, free, counter), _gen(rng, shape, d, env, free, counter))
    role = rng.choice(list(shape.roles))
    if kind in ("exists", "forall"):
        cls = s.Exists if kind == "exists" else s.Forall
        return cls(role, _gen(rng, shape, d, env, free, counter))
    if kind == "atleast":
        return s.AtLeast(rng.randint(0, shape.max_n), role, _gen(rng, shape, d, env, free, counter))
    if kind == "atmost":
        return s.AtMost(rng.randint(0, shape.max_n), role, _gen(rng, shape, d, _flip(env), free, counter))
    var = ""
    while not var or var in free or var in env:
        counter[0] += 1
        var = f"X{counter[0]}"
    cls = s.Mu if kind == "mu" else s.Nu
    return cls(var, _gen(rng, shape, d, {**env, var: 0}, free, counter))


def random_interpretation(rng: random.Random, sig: Signature, size: int, density: float = 0.4) -> Interpretation:
    dom = canonical_domain(size)
    concepts = {a: frozenset(x for x in dom if rng.random() < 0.5) for a in sig.concepts}
    roles = {
        r: frozenset((x, y) for x in dom for y in dom if rng.random() < density) for r in sig.roles
    }
    return Interpretation(dom, concepts, roles)


def random_valuation(rng: random.Random, interp: Interpretation, names) -> dict:
    return {x: frozenset(e for e in interp.domain if rng.random() < 0.5) for x in names}


def random_tree(
    rng: random.Random, sig: Signature, depth: int = 3, branching: int = 3
) -> Interpretation:
    """A tree rooted at ``d1`` with elements named breadth first.  Each edge
    carries one role; each node has at most ``branching`` children."""
    names = ["d1"]
    edges = {r: set() for r in sig.roles}
    level = ["d1"]
    for _ in range(depth):
        nxt = []
        for parent in level:
            if not sig.roles:
                break
            for _ in range(rng.randint(0, branching)):
                child = f"d{len(names) + 1}"
                names.append(child)
                edges[rng.choice(list(sig.roles))].add((parent, child))
                nxt.append(child)
        level = nxt
    concepts = {a: frozenset(x for x in names if rng.random() < 0.5) for a in sig.concepts}
    return Interpretation(tuple(names), concepts, edges)
