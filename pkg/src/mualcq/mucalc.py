"""Modal mu-calculus: formulas, Kripke structures, and translations from concepts.

Two translations are provided.  :func:`translate_q` maps concepts without
number restrictions structurally (``exists`` to ``<R>``, ``forall`` to
``[R]``).  :func:`translate_u` handles number restrictions by reading the
successors of a node as a list: the first one is reached through ``R`` and
the following ones through a fresh label ``R_new``.  Under that reading the
result only needs deterministic structures, and :func:`chain_tree_model`
builds such a structure from a tree-shaped interpretation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Mapping, Optional, Tuple

from . import syntax as s
from .errors import NotATree, NumberRestrictionPresent, UnboundVariable, UnknownIndividual
from .fixpoint import MU, NU, kleene
from .models import Interpretation, reachable


class MuFormula:
    def __str__(self):
        return print_formula(self)


@dataclass(frozen=True, repr=False)
class Atom(MuFormula):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class Var(MuFormula):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class Top(MuFormula):
    pass


@dataclass(frozen=True)
class Bot(MuFormula):
    pass


@dataclass(frozen=True)
class Not(MuFormula):
    arg: MuFormula


@dataclass(frozen=True)
class And(MuFormula):
    left: MuFormula
    right: MuFormula


@dataclass(frozen=True)
class Or(MuFormula):
    left: MuFormula
    right: MuFormula


@dataclass(frozen=True)
class Diamond(MuFormula):
    label: str
    body: MuFormula


@dataclass(frozen=True)
class Box(MuFormula):
    label: str
    body: MuFormula


@dataclass(frozen=True)
class Mu(MuFormula):
    var: str
    body: MuFormula


@dataclass(frozen=True)
class Nu(MuFormula):
    var: str
    body: MuFormula


TRUE = Top()
FALSE = Bot()
_MODALITIES = (Diamond, Box)
_BINDERS = (Mu, Nu)


def children(phi: MuFormula) -> tuple:
    if isinstance(phi, Not):
        return (phi.arg,)
    if isinstance(phi, (And, Or)):
        return (phi.left, phi.right)
    if isinstance(phi, _MODALITIES + _BINDERS):
        return (phi.body,)
    return ()


def subformulas(phi: MuFormula):
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def size(phi: MuFormula) -> int:
    """Node count, labels not counted (same metric as :func:`syntax.size`)."""
    return sum(1 for _ in subformulas(phi))


def labels(phi: MuFormula) -> FrozenSet[str]:
    return frozenset(n.label for n in subformulas(phi) if isinstance(n, _MODALITIES))


def atoms(phi: MuFormula) -> FrozenSet[str]:
    return frozenset(n.name for n in subformulas(phi) if isinstance(n, Atom))


def free_variables(phi: MuFormula) -> FrozenSet[str]:
    if isinstance(phi, Var):
        return frozenset((phi.name,))
    if isinstance(phi, _BINDERS):
        return free_variables(phi.body) - {phi.var}
    out = frozenset()
    for k in children(phi):
        out |= free_variables(k)
    return out


def _odd_occurrence(phi, x, negs):
    if isinstance(phi, Var):
        return phi.name == x and negs % 2 == 1
    if isinstance(phi, _BINDERS) and phi.var == x:
        return False
    step = 1 if isinstance(phi, Not) else 0
    return any(_odd_occurrence(k, x, negs + step) for k in children(phi))


def is_well_formed(phi: MuFormula) -> bool:
    """Every bound variable sits under an even number of negations."""
    return not any(
        isinstance(n, _BINDERS) and _odd_occurrence(n.body, n.var, 0) for n in subformulas(phi)
    )


def alpha_equivalent(a: MuFormula, b: MuFormula) -> bool:
    return _alpha(a, b, {}, {}, 0)


def _alpha(a, b, env_a, env_b, depth):
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        return env_a.get(a.name, ("free", a.name)) == env_b.get(b.name, ("free", b.name))
    if isinstance(a, Atom):
        return a.name == b.name
    if isinstance(a, _BINDERS):
        tag = ("bound", depth)
        return _alpha(a.body, b.body, {**env_a, a.var: tag}, {**env_b, b.var: tag}, depth + 1)
    if isinstance(a, _MODALITIES) and a.label != b.label:
        return False
    return all(_alpha(x, y, env_a, env_b, depth) for x, y in zip(children(a), children(b)))


# Kripke structures ---------------------------------------------------------------


@dataclass(frozen=True)
class KripkeStructure:
    states: Tuple[str, ...]
    relations: Dict[str, FrozenSet[Tuple[str, str]]] = field(default_factory=dict)
    valuation: Dict[str, FrozenSet[str]] = field(default_factory=dict)

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ValueError("a Kripke structure needs at least one state")
        members = set(states)
        relations = {a: frozenset(tuple(p) for p in v) for a, v in self.relations.items()}
        valuation = {p: frozenset(v) for p, v in self.valuation.items()}
        for a, pairs in relations.items():
            for x, y in pairs:
                if x not in members or y not in members:
                    raise ValueError(f"pair ({x},{y}) of label {a} leaves the state set")
        for p, ext in valuation.items():
            if not ext <= members:
                raise ValueError(f"valuation of {p} leaves the state set")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "valuation", valuation)

    @property
    def labels(self) -> FrozenSet[str]:
        return frozenset(self.relations)

    def successors(self, label: str) -> Dict[str, FrozenSet[str]]:
        out = {}
        for x, y in self.relations.get(label, ()):
            out.setdefault(x, set()).add(y)
        return {x: frozenset(ys) for x, ys in out.items()}


def kripke_of_interpretation(i: Interpretation) -> KripkeStructure:
    return KripkeStructure(i.domain, dict(i.roles), dict(i.concepts))


def interpretation_of_kripke(m: KripkeStructure) -> Interpretation:
    return Interpretation(m.states, dict(m.valuation), dict(m.relations))


def eval_mu(phi: MuFormula, m: KripkeStructure, rho: Optional[Mapping] = None) -> FrozenSet[str]:
    """States of ``m`` satisfying ``phi`` under the valuation ``rho``."""
    env = {k: frozenset(v) for k, v in (rho or {}).items()}
    for x in free_variables(phi):
        if x not in env:
            raise UnboundVariable(x)
    succ = {a: m.successors(a) for a in m.relations}
    return _eval(phi, m, frozenset(m.states), succ, env)


def _eval(phi, m, universe, succ, env):
    if isinstance(phi, Var):
        return env[phi.name]
    if isinstance(phi, Atom):
        return m.valuation.get(phi.name, frozenset())
    if isinstance(phi, Top):
        return universe
    if isinstance(phi, Bot):
        return frozenset()
    if isinstance(phi, Not):
        return universe - _eval(phi.arg, m, universe, succ, env)
    if isinstance(phi, And):
        return _eval(phi.left, m, universe, succ, env) & _eval(phi.right, m, universe, succ, env)
    if isinstance(phi, Or):
        return _eval(phi.left, m, universe, succ, env) | _eval(phi.right, m, universe, succ, env)
    if isinstance(phi, _MODALITIES):
        body = _eval(phi.body, m, universe, succ, env)
        rel = succ.get(phi.label, {})
        none = frozenset()
        if isinstance(phi, Diamond):
            return frozenset(x for x in m.states if rel.get(x, none) & body)
        return frozenset(x for x in m.states if rel.get(x, none) <= body)
    if isinstance(phi, _BINDERS):
        def step(e):
            return _eval(phi.body, m, universe, succ, {**env, phi.var: e})

        return kleene(MU if isinstance(phi, Mu) else NU, step, universe)[0]
    raise TypeError(f"not a formula: {phi!r}")


@dataclass(frozen=True)
class Violation:
    label: str
    state: str
    successors: FrozenSet[str]


def check_deterministic(m: KripkeStructure) -> Optional[Violation]:
    """None if every relation is a partial function, else the first offender
    (labels sorted, states in order)."""
    for a in sorted(m.relations):
        succ = m.successors(a)
        for x in m.states:
            if len(succ.get(x, ())) > 1:
                return Violation(a, x, succ[x])
    return None


# Translations -------------------------------------------------------------------


def translate_q(c: s.Concept) -> MuFormula:
    """Structural translation of a concept without number restrictions."""
    if isinstance(c, (s.AtMost, s.AtLeast)):
        raise NumberRestrictionPresent(f"number restriction {c} has no plain modal counterpart; use the deterministic translation")
    if isinstance(c, s.Atomic):
        return Atom(c.name)
    if isinstance(c, s.Var):
        return Var(c.name)
    if isinstance(c, s.Top):
        return TRUE
    if isinstance(c, s.Bot):
        return FALSE
    if isinstance(c, s.Not):
        return Not(translate_q(c.arg))
    if isinstance(c, s.And):
        return And(translate_q(c.left), translate_q(c.right))
    if isinstance(c, s.Or):
        return Or(translate_q(c.left), translate_q(c.right))
    if isinstance(c, s.Exists):
        return Diamond(c.role, translate_q(c.body))
    if isinstance(c, s.Forall):
        return Box(c.role, translate_q(c.body))
    if isinstance(c, s.Mu):
        return Mu(c.var, translate_q(c.body))
    if isinstance(c, s.Nu):
        return Nu(c.var, translate_q(c.body))
    raise TypeError(f"cannot translate {type(c).__name__}")


@dataclass(frozen=True)
class TranslationResult:
    formula: MuFormula
    fresh_roles: Dict[str, str]


def fresh_role_names(roles, avoid=()) -> Dict[str, str]:
    """``R -> R_new`` for each role, with a numeric suffix on collision."""
    taken = set(roles) | set(avoid)
    out = {}
    for r in sorted(roles):
        name, k = f"{r}_new", 1
        while name in taken:
            k += 1
            name = f"{r}_new{k}"
        taken.add(name)
        out[r] = name
    return out


class _Expander:
    """Builds the star/plus abbreviations with fresh fixpoint variables."""

    def __init__(self, avoid):
        self.used = set(avoid)
        self.counter = 0

    def var(self):
        while True:
            self.counter += 1
            name = f"Z{self.counter}"
            if name not in self.used:
                self.used.add(name)
                return name

    def box_star(self, label, phi):
        z = self.var()
        return Nu(z, And(phi, Box(label, Var(z))))

    def diamond_star(self, label, phi):
        z = self.var()
        return Mu(z, Or(phi, Diamond(label, Var(z))))

    def box_plus(self, label, phi):
        return Box(label, self.box_star(label, phi))

    def diamond_plus(self, label, phi):
        return Diamond(label, self.diamond_star(label, phi))


def translate_u(c: s.Concept, fresh_roles: Optional[Mapping[str, str]] = None) -> TranslationResult:
    """Translation into a formula over the role labels and one fresh label per
    role, to be read on structures where each node's successor list is chained.

    ``(atleast 0 R. C)`` becomes ``true``.
    """
    roles = s.atomic_roles(c)
    avoid = s.atomic_concepts(c) | roles | s.variable_names(c)
    names = fresh_role_names(roles, avoid)
    names.update(fresh_roles or {})
    ex = _Expander(s.variable_names(c) | avoid)
    return TranslationResult(_u(c, names, ex), {r: names[r] for r in sorted(roles)})


def _u(c, new, ex):
    if isinstance(c, s.Atomic):
        return Atom(c.name)
    if isinstance(c, s.Var):
        return Var(c.name)
    if isinstance(c, s.Top):
        return TRUE
    if isinstance(c, s.Bot):
        return FALSE
    if isinstance(c, s.Not):
        return Not(_u(c.arg, new, ex))
    if isinstance(c, s.And):
        return And(_u(c.left, new, ex), _u(c.right, new, ex))
    if isinstance(c, s.Or):
        return Or(_u(c.left, new, ex), _u(c.right, new, ex))
    if isinstance(c, s.Mu):
        return Mu(c.var, _u(c.body, new, ex))
    if isinstance(c, s.Nu):
        return Nu(c.var, _u(c.body, new, ex))
    r = c.role
    rn = new[r]
    phi = _u(c.body, new, ex)
    if isinstance(c, s.Exists):
        return Diamond(r, ex.diamond_star(rn, phi))
    if isinstance(c, s.Forall):
        return Box(r, ex.box_star(rn, phi))
    if isinstance(c, s.AtMost):
        # no n+1 chained children satisfy phi
        nest = Not(phi)
        for _ in range(c.n):
            nest = Or(Not(phi), ex.box_plus(rn, nest))
        return Box(r, ex.box_star(rn, nest))
    if isinstance(c, s.AtLeast):
        if c.n == 0:
            return TRUE
        nest = phi
        for _ in range(c.n - 1):
            nest = And(phi, ex.diamond_plus(rn, nest))
        return Diamond(r, ex.diamond_star(rn, nest))
    raise TypeError(f"cannot translate {type(c).__name__}")


# Chained tree models ---------------------------------------------------------------


def check_tree(i: Interpretation, root: str) -> FrozenSet[str]:
    """Elements reachable from ``root``; raises :class:`NotATree` unless every
    one but the root has exactly one incoming edge and the root has none."""
    if root not in i.universe:
        raise UnknownIndividual(root)
    keep = reachable(i, root)
    incoming = {x: [] for x in keep}
    for r in sorted(i.roles):
        for x, y in i.roles[r]:
            if x in keep:
                incoming[y].append((r, x))
    for x in i.domain:
        if x not in keep:
            continue
        if x == root and incoming[x]:
            raise NotATree(f"edge back into the root {root}", ("cycle", root, tuple(incoming[x])))
        if x != root and len(incoming[x]) != 1:
            raise NotATree(f"{x} has {len(incoming[x])} parents", ("parents", x, tuple(incoming[x])))
    return keep


def chain_tree_model(i: Interpretation, root: str, fresh_roles: Optional[Mapping[str, str]] = None):
    """Deterministic structure coding the tree below ``root``.

    For each parent ``x`` with ``R``-children ``z1..zl`` (domain order), keep
    ``(x, z1)`` under ``R`` and add ``(zk, zk+1)`` under the fresh label of
    ``R``.  Returns the structure and the map from individuals to states.
    """
    keep = check_tree(i, root)
    new = fresh_role_names(i.roles, set(i.concepts) | set(i.roles))
    new.update(fresh_roles or {})
    order = {x: n for n, x in enumerate(i.domain)}
    relations = {}
    for r in sorted(i.roles):
        first, chain = set(), set()
        succ = i.successors(r)
        for x in keep:
            kids = sorted(succ.get(x, ()), key=order.get)
            if kids:
                first.add((x, kids[0]))
                chain.update(zip(kids, kids[1:]))
        relations[r] = first
        relations[new[r]] = chain
    states = tuple(x for x in i.domain if x in keep)
    valuation = {a: ext & keep for a, ext in i.concepts.items()}
    return KripkeStructure(states, relations, valuation), {x: x for x in states}


def collapse_deterministic(m: KripkeStructure, fresh_roles: Mapping[str, str]) -> Interpretation:
    """Read ``R`` as ``R`` followed by any number of ``R_new`` steps."""
    fresh = set(fresh_roles.values())
    roles = {}
    for r, rn in fresh_roles.items():
        chain = m.successors(rn)
        pairs = set()
        for x, z in m.relations.get(r, ()):
            seen = {z}
            todo = [z]
            while todo:
                y = todo.pop()
                for w in chain.get(y, ()):
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            pairs.update((x, y) for y in seen)
        roles[r] = frozenset(pairs)
    for a, pairs in m.relations.items():
        if a not in fresh and a not in roles:
            roles[a] = pairs
    return Interpretation(m.states, dict(m.valuation), roles)


# Printing --------------------------------------------------------------------

_OR, _AND, _UNARY = 0, 1, 2


def print_formula(phi: MuFormula) -> str:
    return _fmt(phi, _OR, True)


def _fmt(phi, prec, tail):
    if isinstance(phi, (Atom, Var)):
        return phi.name
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bot):
        return "false"
    if isinstance(phi, Or):
        if prec > _OR:
            return "(" + _fmt(phi, _OR, True) + ")"
        return f"{_fmt(phi.left, _OR, False)} | {_fmt(phi.right, _AND, tail)}"
    if isinstance(phi, And):
        if prec > _AND:
            return "(" + _fmt(phi, _OR, True) + ")"
        return f"{_fmt(phi.left, _AND, False)} & {_fmt(phi.right, _UNARY, tail)}"
    if isinstance(phi, Not):
        return "~" + _fmt(phi.arg, _UNARY, tail)
    if isinstance(phi, Diamond):
        return f"<{phi.label}>" + _fmt(phi.body, _UNARY, tail)
    if isinstance(phi, Box):
        return f"[{phi.label}]" + _fmt(phi.body, _UNARY, tail)
    if isinstance(phi, _BINDERS):
        kw = "mu" if isinstance(phi, Mu) else "nu"
        text = f"{kw} {phi.var}. " + _fmt(phi.body, _OR, True)
        return text if tail else "(" + text + ")"
    raise TypeError(f"not a formula: {phi!r}")


def format_kripke(m: KripkeStructure) -> str:
    from .models import format_model

    return format_model(interpretation_of_kripke(m), relation_keyword="label")
