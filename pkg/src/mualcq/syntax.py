"""Abstract syntax of muALCQ concepts and the purely syntactic operations on it.

Concepts are immutable dataclasses.  Atomic roles are plain strings; the
PDL-style role constructors (chain, union, star, test) only occur in the
*extended* syntax produced by the parser and are removed by :func:`desugar_pdl`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import (
    NotAFixpoint,
    UnsupportedRole,
    WellFormednessError,
)


class Concept:
    """Base class of concept nodes."""

    __slots__ = ()

    def __str__(self):
        from .parser import print_concept

        return print_concept(self)


@dataclass(frozen=True)
class Atomic(Concept):
    name: str


@dataclass(frozen=True)
class Var(Concept):
    name: str


@dataclass(frozen=True)
class Top(Concept):
    pass


@dataclass(frozen=True)
class Bot(Concept):
    pass


@dataclass(frozen=True)
class Not(Concept):
    arg: Concept


@dataclass(frozen=True)
class And(Concept):
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Or(Concept):
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Exists(Concept):
    role: "Role"
    body: Concept


@dataclass(frozen=True)
class Forall(Concept):
    role: "Role"
    body: Concept


@dataclass(frozen=True)
class AtMost(Concept):
    n: int
    role: "Role"
    body: Concept

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"number restriction needs a natural number, got {self.n!r}")


@dataclass(frozen=True)
class AtLeast(Concept):
    n: int
    role: "Role"
    body: Concept

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"number restriction needs a natural number, got {self.n!r}")


@dataclass(frozen=True)
class Mu(Concept):
    var: str
    body: Concept


@dataclass(frozen=True)
class Nu(Concept):
    var: str
    body: Concept


# Extended syntax only -------------------------------------------------------


class RoleExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Chain(RoleExpr):
    first: "Role"
    second: "Role"


@dataclass(frozen=True)
class RoleUnion(RoleExpr):
    left: "Role"
    right: "Role"


@dataclass(frozen=True)
class Star(RoleExpr):
    role: "Role"


@dataclass(frozen=True)
class IdTest(RoleExpr):
    concept: Concept


@dataclass(frozen=True)
class WellFounded(Concept):
    """``wf(R)``: no infinite R-chain starts here."""

    role: "Role"


Role = Union[str, RoleExpr]

TOP = Top()
BOT = Bot()

QUANTIFIERS = (Exists, Forall, AtMost, AtLeast)
BINDERS = (Mu, Nu)


def children(c: Concept) -> tuple:
    if isinstance(c, Not):
        return (c.arg,)
    if isinstance(c, (And, Or)):
        return (c.left, c.right)
    if isinstance(c, QUANTIFIERS) or isinstance(c, BINDERS):
        return (c.body,)
    return ()


def rebuild(c: Concept, kids) -> Concept:
    """Same constructor as ``c`` with new sub-concepts."""
    if isinstance(c, Not):
        return Not(kids[0])
    if isinstance(c, And):
        return And(kids[0], kids[1])
    if isinstance(c, Or):
        return Or(kids[0], kids[1])
    if isinstance(c, Exists):
        return Exists(c.role, kids[0])
    if isinstance(c, Forall):
        return Forall(c.role, kids[0])
    if isinstance(c, AtMost):
        return AtMost(c.n, c.role, kids[0])
    if isinstance(c, AtLeast):
        return AtLeast(c.n, c.role, kids[0])
    if isinstance(c, Mu):
        return Mu(c.var, kids[0])
    if isinstance(c, Nu):
        return Nu(c.var, kids[0])
    return c


def subconcepts(c: Concept) -> Iterator[Concept]:
    """Pre-order traversal of all sub-concept occurrences."""
    stack = [c]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def size(c: Concept) -> int:
    """Number of constructor nodes; roles and numbers are not counted."""
    return sum(1 for _ in subconcepts(c))


def conj(*parts: Concept) -> Concept:
    """Left-nested conjunction; the empty conjunction is top."""
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(*parts: Concept) -> Concept:
    if not parts:
        return BOT
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def atomic_concepts(c: Concept) -> frozenset:
    return frozenset(n.name for n in subconcepts(c) if isinstance(n, Atomic))


def atomic_roles(c: Concept) -> frozenset:
    return frozenset(n.role for n in subconcepts(c) if isinstance(n, QUANTIFIERS))


def variable_names(c: Concept) -> frozenset:
    """Every variable name used in ``c``, bound or free."""
    names = set()
    for n in subconcepts(c):
        if isinstance(n, Var):
            names.add(n.name)
        elif isinstance(n, BINDERS):
            names.add(n.var)
    return frozenset(names)


def free_variables(c: Concept) -> frozenset:
    if isinstance(c, Var):
        return frozenset((c.name,))
    if isinstance(c, BINDERS):
        return free_variables(c.body) - {c.var}
    out = frozenset()
    for k in children(c):
        out |= free_variables(k)
    return out


def is_closed(c: Concept) -> bool:
    return not free_variables(c)


def fresh_name(base: str, avoid) -> str:
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(c: Concept, x: str, d: Concept) -> Concept:
    """Capture-avoiding substitution of ``d`` for the free occurrences of ``x``."""
    return _subst(c, x, d, free_variables(d))


def _subst(c, x, d, fv_d):
    if isinstance(c, Var):
        return d if c.name == x else c
    if isinstance(c, BINDERS):
        if c.var == x or x not in free_variables(c.body):
            return c
        var, body = c.var, c.body
        if var in fv_d:
            new = fresh_name(var, fv_d | variable_names(body) | {x})
            body = _subst(body, var, Var(new), frozenset((new,)))
            var = new
        return type(c)(var, _subst(body, x, d, fv_d))
    kids = children(c)
    if not kids:
        return c
    return rebuild(c, [_subst(k, x, d, fv_d) for k in kids])


def rename_bound(c: Concept, old: str, new: str) -> Concept:
    """Rename a binder ``old`` at the root of ``c`` (alpha conversion)."""
    if not isinstance(c, BINDERS) or c.var != old:
        raise NotAFixpoint(f"root does not bind {old}")
    return type(c)(new, substitute(c.body, old, Var(new)))


class Polarity(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    BOTH = "both"
    ABSENT = "absent"


def _parities(c, x, parity, out):
    if isinstance(c, Var):
        if c.name == x:
            out.add(parity)
    elif isinstance(c, BINDERS):
        if c.var != x:
            _parities(c.body, x, parity, out)
    elif isinstance(c, Not):
        _parities(c.arg, x, parity ^ 1, out)
    elif isinstance(c, AtMost):
        # the qualifier of an at-most restriction sits under one negation
        _parities(c.body, x, parity ^ 1, out)
    else:
        for k in children(c):
            _parities(k, x, parity, out)


def polarity_of(c: Concept, x: str) -> Polarity:
    seen = set()
    _parities(c, x, 0, seen)
    if not seen:
        return Polarity.ABSENT
    if seen == {0}:
        return Polarity.POSITIVE
    if seen == {1}:
        return Polarity.NEGATIVE
    return Polarity.BOTH


def _negative_path(c, x, parity, path):
    """Path to the first free occurrence of ``x`` under an odd number of negations."""
    if isinstance(c, Var):
        return list(path) if c.name == x and parity else None
    if isinstance(c, BINDERS) and c.var == x:
        return None
    flip = 1 if isinstance(c, (Not, AtMost)) else 0
    for k in children(c):
        found = _negative_path(k, x, parity ^ flip, path + [type(k).__name__])
        if found is not None:
            return found
    return None


def check_well_formed(c: Concept) -> None:
    """Raise :class:`WellFormednessError` unless every binder is positive."""
    for node in subconcepts(c):
        if isinstance(node, BINDERS):
            pol = polarity_of(node.body, node.var)
            if pol not in (Polarity.POSITIVE, Polarity.ABSENT):
                kind = "mu" if isinstance(node, Mu) else "nu"
                path = _negative_path(node.body, node.var, 0, [type(node.body).__name__])
                raise WellFormednessError(f"{kind} {node.var}", node.var, path or [])


def is_well_formed(c: Concept) -> bool:
    try:
        check_well_formed(c)
    except WellFormednessError:
        return False
    return True


def dual_fixpoint(c: Concept) -> Concept:
    """``nu X.B`` becomes ``not mu X. not B[X/not X]`` and symmetrically for mu."""
    if not isinstance(c, BINDERS):
        raise NotAFixpoint(f"expected a mu/nu concept, got {type(c).__name__}")
    other = Mu if isinstance(c, Nu) else Nu
    flipped = substitute(c.body, c.var, Not(Var(c.var)))
    return Not(other(c.var, Not(flipped)))


def alpha_equivalent(a: Concept, b: Concept) -> bool:
    return _alpha(a, b, {}, {}, 0)


def _alpha(a, b, env_a, env_b, depth):
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        # bound names compare by binder depth, free names by identity
        return env_a.get(a.name, a.name) == env_b.get(b.name, b.name) and (
            (a.name in env_a) == (b.name in env_b)
        )
    if isinstance(a, Atomic):
        return a.name == b.name
    if isinstance(a, BINDERS):
        tag = ("#bound", depth)
        return _alpha(a.body, b.body, {**env_a, a.var: tag}, {**env_b, b.var: tag}, depth + 1)
    if isinstance(a, QUANTIFIERS):
        if a.role != b.role or getattr(a, "n", None) != getattr(b, "n", None):
            return False
    ka, kb = children(a), children(b)
    return len(ka) == len(kb) and all(_alpha(x, y, env_a, env_b, depth) for x, y in zip(ka, kb))


# PDL role constructs ---------------------------------------------------------


def _used_names(c) -> set:
    names = set()
    for n in _ext_nodes(c):
        if isinstance(n, (Var, Atomic)):
            names.add(n.name)
        elif isinstance(n, BINDERS):
            names.add(n.var)
    return names


def _ext_nodes(c):
    yield c
    for k in children(c):
        yield from _ext_nodes(k)
    role = getattr(c, "role", None)
    if isinstance(role, RoleExpr):
        yield from _role_concepts(role)


def _role_concepts(r):
    if isinstance(r, IdTest):
        yield from _ext_nodes(r.concept)
    elif isinstance(r, (Chain, RoleUnion)):
        a, b = (r.first, r.second) if isinstance(r, Chain) else (r.left, r.right)
        yield from _role_concepts(a)
        yield from _role_concepts(b)
    elif isinstance(r, Star):
        yield from _role_concepts(r.role)


def desugar_pdl(c: Concept) -> Concept:
    """Eliminate chain/union/star/test roles and ``wf(R)`` using fixpoints."""
    avoid = _used_names(c)
    return _Desugarer(avoid).concept(c)


class _Desugarer:
    def __init__(self, avoid):
        self.avoid = set(avoid)

    def fresh(self):
        name = fresh_name("X", self.avoid)
        self.avoid.add(name)
        return name

    def concept(self, c):
        if isinstance(c, WellFounded):
            x = self.fresh()
            return Mu(x, self.forall(c.role, Var(x)))
        if isinstance(c, (Exists, Forall)):
            body = self.concept(c.body)
            if isinstance(c, Exists):
                return self.exists(c.role, body)
            return self.forall(c.role, body)
        if isinstance(c, (AtMost, AtLeast)):
            if not isinstance(c.role, str):
                raise UnsupportedRole(
                    "number restrictions only admit atomic roles, got " + repr(c.role)
                )
            return type(c)(c.n, c.role, self.concept(c.body))
        kids = children(c)
        if not kids:
            return c
        return rebuild(c, [self.concept(k) for k in kids])

    def exists(self, r, body):
        if isinstance(r, str):
            return Exists(r, body)
        if isinstance(r, Chain):
            return self.exists(r.first, self.exists(r.second, body))
        if isinstance(r, RoleUnion):
            return Or(self.exists(r.left, body), self.exists(r.right, body))
        if isinstance(r, Star):
            x = self.fresh()
            return Mu(x, Or(body, self.exists(r.role, Var(x))))
        if isinstance(r, IdTest):
            return And(body, self.concept(r.concept))
        raise UnsupportedRole(repr(r))

    def forall(self, r, body):
        if isinstance(r, str):
            return Forall(r, body)
        if isinstance(r, Chain):
            return self.forall(r.first, self.forall(r.second, body))
        if isinstance(r, RoleUnion):
            return And(self.forall(r.left, body), self.forall(r.right, body))
        if isinstance(r, Star):
            x = self.fresh()
            return Nu(x, And(body, self.forall(r.role, Var(x))))
        if isinstance(r, IdTest):
            return Or(body, Not(self.concept(r.concept)))
        raise UnsupportedRole(repr(r))


def uniquify_binders(c: Concept, reserved=()) -> Concept:
    """Alpha-rename so that every binder introduces a distinct name.

    ``reserved`` names (free variables, atomic concepts) are never reused
    for a renamed binder.
    """
    taken = set(reserved)
    avoid = set(reserved) | variable_names(c) | atomic_concepts(c)

    def walk(node, env):
        if isinstance(node, Var):
            return Var(env.get(node.name, node.name))
        if isinstance(node, BINDERS):
            name = node.var
            if name in taken:
                name = fresh_name(name, avoid)
            taken.add(name)
            avoid.add(name)
            return type(node)(name, walk(node.body, {**env, node.var: name}))
        kids = children(node)
        if not kids:
            return node
        return rebuild(node, [walk(k, env) for k in kids])

    return walk(c, {})


# TBoxes ----------------------------------------------------------------------


@dataclass(frozen=True)
class Inclusion:
    lhs: Concept
    rhs: Concept

    def __iter__(self):
        return iter((self.lhs, self.rhs))


@dataclass(frozen=True)
class TBox:
    """An ordered list of inclusion assertions between closed concepts."""

    assertions: tuple = ()

    def __post_init__(self):
        from .errors import ClosednessError

        items = tuple(a if isinstance(a, Inclusion) else Inclusion(*a) for a in self.assertions)
        for i, (lhs, rhs) in enumerate(items):
            for side in (lhs, rhs):
                fv = free_variables(side)
                if fv:
                    raise ClosednessError(fv, f"assertion {i + 1}")
                check_well_formed(side)
        object.__setattr__(self, "assertions", items)

    def __len__(self):
        return len(self.assertions)

    def __iter__(self):
        return iter(self.assertions)

    def concepts(self) -> frozenset:
        out = frozenset()
        for lhs, rhs in self.assertions:
            out |= atomic_concepts(lhs) | atomic_concepts(rhs)
        return out

    def roles(self) -> frozenset:
        out = frozenset()
        for lhs, rhs in self.assertions:
            out |= atomic_roles(lhs) | atomic_roles(rhs)
        return out

    def __add__(self, other: "TBox") -> "TBox":
        return TBox(self.assertions + tuple(other.assertions))
