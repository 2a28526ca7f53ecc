"""Bounded satisfiability and implication checking.

Nothing here ever claims unsatisfiability or validity: exhausting the size
bound yields :class:`UnknownUpTo` or :class:`HoldsUpTo`.  Every positive
verdict carries a model that has been re-checked with the plain evaluator.

Search strategy
---------------
By default models are looked for with :func:`search.find_models` in rooted
form: the witness is ``d1`` and every element is reachable from it.  This
loses nothing, because the sub-interpretation generated by a witness is again
a witness (and a model of the TBox) and is no larger.  Before searching, the
problem is split into groups of assertions that share no symbol.  The group
touching the queried concepts is searched for a witness; every other group
only needs some model, and the pieces are combined with
:func:`models.product`.  If some other group has no model within the bound,
the whole TBox has none either.

``method="enumerate"`` instead walks :func:`models.enumerate_interpretations`
and returns the first witness in counter order (first element in domain order).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Union

from . import syntax as s
from .errors import CapExceeded, InternalError, NotClosed
from .models import (
    Interpretation,
    Signature,
    enumerate_interpretations,
    evaluate,
    first_violation,
    format_model,
    generated_sub,
    product,
    satisfies_tbox,
)
from .search import find_models

DEFAULT_MAX_SIZE = 3
SEARCH_CAP = 8
ENUMERATE_CAP = 5
STRATEGIES = ("direct", "internalized", "both")


@dataclass(frozen=True)
class Satisfiable:
    witness: Interpretation
    element: str
    bound: int
    strategy: str = "search"
    kind = "satisfiable"


@dataclass(frozen=True)
class UnknownUpTo:
    bound: int
    strategy: str = "search"
    kind = "unknown"


@dataclass(frozen=True)
class Refuted:
    counter_model: Interpretation
    element: str
    bound: int
    strategy: str = "direct"
    kind = "refuted"


@dataclass(frozen=True)
class HoldsUpTo:
    bound: int
    strategy: str = "direct"
    kind = "holds"


SatVerdict = Union[Satisfiable, UnknownUpTo]
ImplicationVerdict = Union[Refuted, HoldsUpTo]


def _require_closed(*concepts):
    for c in concepts:
        fv = s.free_variables(c)
        if fv:
            raise NotClosed(fv, s.Concept.__str__(c))
        s.check_well_formed(c)


def _as_tbox(k) -> s.TBox:
    if k is None:
        return s.TBox()
    return k if isinstance(k, s.TBox) else s.TBox(tuple(k))


def internalize(k, c: s.Concept, d: s.Concept) -> s.Concept:
    """The concept ``nu X.(forall R1.X and ... and C_K) and C and not D``.

    ``C_K`` conjoins ``not Ci or Di`` over the assertions of ``k``; the roles
    range over every role of ``k``, ``c`` and ``d``.  It is satisfiable exactly
    when some model of ``k`` has an instance of ``c`` outside ``d``.
    """
    k = _as_tbox(k)
    _require_closed(c, d)
    roles = sorted(k.roles() | s.atomic_roles(c) | s.atomic_roles(d))
    used = set(s.variable_names(c)) | s.variable_names(d)
    for lhs, rhs in k:
        used |= s.variable_names(lhs) | s.variable_names(rhs)
    x = s.fresh_name("X", used)
    ck = s.conj(*(s.Or(s.Not(lhs), rhs) for lhs, rhs in k))
    guard = s.Nu(x, s.conj(*(s.Forall(r, s.Var(x)) for r in roles), ck))
    return s.conj(guard, c, s.Not(d))


def closure_bound(c: s.Concept) -> int:
    """``2 ** m`` with ``m`` the number of distinct subterms of ``c``.

    Advisory only: a size beyond which bounded search is expected to be
    complete.  It is never used to claim unsatisfiability.
    """
    return 2 ** len(set(s.subconcepts(c)))


def _symbols(c):
    return {("c", a) for a in s.atomic_concepts(c)} | {("r", r) for r in s.atomic_roles(c)}


def split_by_symbols(items, seed_symbols):
    """Group ``items`` (pairs ``(payload, symbols)``) into classes linked by
    shared symbols.  The first group is the one containing ``seed_symbols``
    (possibly with no items); the rest are ordered by their smallest symbol.
    Returns a list of ``(symbols, payloads)``.
    """
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(group):
        group = list(group)
        root = find(group[0])
        for other in group[1:]:
            parent[find(other)] = root

    seed = ("seed", "")
    union([seed, *seed_symbols])
    for _, syms in items:
        if syms:
            union(syms)
    groups = {}
    for payload, syms in items:
        root = find(next(iter(syms))) if syms else find(seed)
        groups.setdefault(root, []).append(payload)
    members = {}
    for sym in list(parent):
        members.setdefault(find(sym), set()).add(sym)
    head = find(seed)
    out = [(members[head] - {seed}, groups.get(head, []))]
    rest = [r for r in groups if r != head]
    rest.sort(key=lambda r: min(members[r]))
    out.extend((members[r], groups[r]) for r in rest)
    return out


def _sig_of(symbols) -> Signature:
    return Signature(
        tuple(sorted(n for kind, n in symbols if kind == "c")),
        tuple(sorted(n for kind, n in symbols if kind == "r")),
    )


def _first_rooted(sig, constraints, goal, max_size):
    for size in range(1, max_size + 1):
        for model in find_models(sig, size, constraints, goal, rooted=True):
            return model
    return None


def _combine(first, witness, others, max_size):
    """Multiply ``first`` by the first rooted model of each ``(sig, constraints)``."""
    model = first
    for sig, constraints in others:
        other = _first_rooted(sig, constraints, None, max_size)
        if other is None:
            return None
        model, names = product(model, other)
        witness = names[witness, other.domain[0]]
    return model, witness


def _pad(model: Interpretation, sig: Signature) -> Interpretation:
    """Give symbols of ``sig`` the model does not mention an empty extension."""
    concepts = dict(model.concepts)
    roles = dict(model.roles)
    for a in sig.concepts:
        concepts.setdefault(a, frozenset())
    for r in sig.roles:
        roles.setdefault(r, frozenset())
    return Interpretation(model.domain, concepts, roles)


def _axioms(k: s.TBox):
    return [s.Or(s.Not(lhs), rhs) for lhs, rhs in k]


def _check_size(max_size, cap):
    if max_size < 1:
        raise ValueError("the size bound must be at least 1")
    if max_size > cap:
        raise CapExceeded(f"size bound {max_size} exceeds cap {cap}")


def _search_witness(k: s.TBox, goal: s.Concept, max_size: int):
    """Some ``(model of k, element of goal)`` within the bound, or None."""
    axioms = _axioms(k)
    groups = split_by_symbols([(ax, _symbols(ax)) for ax in axioms], _symbols(goal))
    head_syms, head_axioms = groups[0]
    first = _first_rooted(_sig_of(head_syms | _symbols(goal)), head_axioms, goal, max_size)
    if first is None:
        return None
    others = [(_sig_of(syms), axs) for syms, axs in groups[1:]]
    return _combine(first, first.domain[0], others, max_size)


def sat_bounded(
    c: s.Concept,
    max_size: int = DEFAULT_MAX_SIZE,
    sig: Optional[Signature] = None,
    tbox=None,
    method: str = "search",
) -> SatVerdict:
    """Look for an interpretation (a model of ``tbox`` if given) of size at
    most ``max_size`` in which ``c`` has an instance."""
    k = _as_tbox(tbox)
    _require_closed(c)
    full_sig = Signature.of(c, k) | (sig or Signature())
    if method == "enumerate":
        _check_size(max_size, ENUMERATE_CAP)
        for size in range(1, max_size + 1):
            for interp in enumerate_interpretations(full_sig, size, ENUMERATE_CAP):
                ext = evaluate(c, interp)
                if ext and satisfies_tbox(interp, k):
                    elem = next(x for x in interp.domain if x in ext)
                    return Satisfiable(interp, elem, max_size, "enumerate")
        return UnknownUpTo(max_size, "enumerate")
    if method != "search":
        raise ValueError(f"unknown method {method!r}")
    _check_size(max_size, SEARCH_CAP)
    found = _search_witness(k, c, max_size)
    if found is None:
        return UnknownUpTo(max_size)
    model, elem = found
    model = _pad(model, full_sig)
    if elem not in evaluate(c, model) or not satisfies_tbox(model, k):
        raise InternalError("search returned a witness that does not re-check")
    return Satisfiable(model, elem, max_size)


def _direct(k, c, d, max_size):
    found = _search_witness(k, s.And(c, s.Not(d)), max_size)
    if found is None:
        return HoldsUpTo(max_size, "direct")
    return Refuted(found[0], found[1], max_size, "direct")


def _internalized(k, c, d, max_size):
    items = [(incl, _symbols(incl.lhs) | _symbols(incl.rhs)) for incl in k]
    groups = split_by_symbols(items, _symbols(c) | _symbols(d))
    head_syms, head = groups[0]
    goal = internalize(s.TBox(tuple(head)), c, d)
    first = _first_rooted(_sig_of(head_syms | _symbols(goal)), [], goal, max_size)
    if first is None:
        return HoldsUpTo(max_size, "internalized")
    # other groups: any instance of their own guard, multiplied in
    model, elem = first, first.domain[0]
    for syms, incls in groups[1:]:
        g = internalize(s.TBox(tuple(incls)), s.TOP, s.BOT)
        found = _first_rooted(_sig_of(syms), [], g, max_size)
        if found is None:
            return HoldsUpTo(max_size, "internalized")
        model, names = product(model, found)
        elem = names[elem, found.domain[0]]
    if elem not in evaluate(internalize(k, c, d), model):
        raise InternalError("product of internalized witnesses does not satisfy the internalized concept")
    # the generated sub-interpretation of a witness is a counter-model
    sub, _ = generated_sub(model, {}, elem)
    return Refuted(sub, elem, max_size, "internalized")


def implies_bounded(
    k,
    c: s.Concept,
    d: s.Concept,
    max_size: int = DEFAULT_MAX_SIZE,
    strategy: str = "both",
    sig: Optional[Signature] = None,
) -> ImplicationVerdict:
    """Look for a model of ``k`` of size at most ``max_size`` with an instance
    of ``c`` that is not an instance of ``d``.

    ``strategy`` is ``"direct"`` (search models of ``k``), ``"internalized"``
    (search instances of :func:`internalize`) or ``"both"``, which runs the
    two and raises :class:`InternalError` if they disagree.
    """
    k = _as_tbox(k)
    _require_closed(c, d)
    _check_size(max_size, SEARCH_CAP)
    full_sig = Signature.of(c, d, k) | (sig or Signature())
    if strategy == "direct":
        verdict = _direct(k, c, d, max_size)
    elif strategy == "internalized":
        verdict = _internalized(k, c, d, max_size)
    elif strategy == "both":
        a = _direct(k, c, d, max_size)
        b = _internalized(k, c, d, max_size)
        if a.kind != b.kind:
            raise InternalError(f"strategies disagree: direct={a.kind}, internalized={b.kind}")
        verdict = HoldsUpTo(max_size, "both") if a.kind == "holds" else Refuted(
            a.counter_model, a.element, max_size, "both"
        )
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if isinstance(verdict, Refuted):
        model = _pad(verdict.counter_model, full_sig)
        if first_violation(model, k) is not None:
            raise InternalError("counter-model violates the TBox")
        if verdict.element not in evaluate(c, model) - evaluate(d, model):
            raise InternalError("counter-model element does not separate the concepts")
        verdict = Refuted(model, verdict.element, verdict.bound, verdict.strategy)
    return verdict


# Serialization -------------------------------------------------------------------


def model_record(m: Interpretation) -> dict:
    order = {x: i for i, x in enumerate(m.domain)}
    return {
        "domain": list(m.domain),
        "concepts": {a: [x for x in m.domain if x in m.concepts[a]] for a in sorted(m.concepts)},
        "roles": {
            r: [list(p) for p in sorted(m.roles[r], key=lambda p: (order[p[0]], order[p[1]]))]
            for r in sorted(m.roles)
        },
    }


def verdict_record(v) -> dict:
    out = {"verdict": v.kind, "bound": v.bound, "strategy": v.strategy}
    if isinstance(v, Satisfiable):
        out["element"] = v.element
        out["model"] = model_record(v.witness)
    elif isinstance(v, Refuted):
        out["element"] = v.element
        out["model"] = model_record(v.counter_model)
    return out


def verdict_text(v) -> str:
    lines = [f"verdict: {v.kind}", f"bound: {v.bound}", f"strategy: {v.strategy}"]
    model = getattr(v, "witness", None) or getattr(v, "counter_model", None)
    if model is not None:
        lines.append(f"element: {v.element}")
        lines.append(format_model(model).rstrip("\n"))
    return "\n".join(lines) + "\n"


def verdict_json(v) -> str:
    return json.dumps(verdict_record(v), sort_keys=True)
