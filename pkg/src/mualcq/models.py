"""Finite interpretations, valuations and the extension function.

Sets of individuals are ``frozenset``s of individual names; a valuation is a
plain mapping from variable names to such sets.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterator, Mapping, Optional, Tuple

from . import syntax as s
from .errors import (
    CapExceeded,
    NonMonotoneOperator,
    ParseError,
    UnboundVariable,
    UnknownIndividual,
)
from .fixpoint import MU, NU, kleene, tarski

Valuation = Mapping[str, FrozenSet[str]]

DEFAULT_ENUMERATION_CAP = 5


@dataclass(frozen=True)
class Signature:
    concepts: Tuple[str, ...] = ()
    roles: Tuple[str, ...] = ()

    def __post_init__(self):
        concepts, roles = tuple(self.concepts), tuple(self.roles)
        if len(set(concepts)) != len(concepts) or len(set(roles)) != len(roles):
            raise ValueError("signature names must be unique")
        if set(concepts) & set(roles):
            raise ValueError("concept and role names must be disjoint")
        object.__setattr__(self, "concepts", concepts)
        object.__setattr__(self, "roles", roles)

    @classmethod
    def of(cls, *items) -> "Signature":
        """Sorted signature of the given concepts and/or TBoxes."""
        concepts, roles = set(), set()
        for item in items:
            if isinstance(item, s.TBox):
                concepts |= item.concepts()
                roles |= item.roles()
            else:
                concepts |= s.atomic_concepts(item)
                roles |= s.atomic_roles(item)
        return cls(tuple(sorted(concepts)), tuple(sorted(roles)))

    def __or__(self, other: "Signature") -> "Signature":
        return Signature(
            tuple(sorted(set(self.concepts) | set(other.concepts))),
            tuple(sorted(set(self.roles) | set(other.roles))),
        )

    def __len__(self):
        return len(self.concepts) + len(self.roles)


@dataclass(frozen=True)
class Interpretation:
    domain: Tuple[str, ...]
    concepts: Dict[str, FrozenSet[str]] = field(default_factory=dict)
    roles: Dict[str, FrozenSet[Tuple[str, str]]] = field(default_factory=dict)

    def __post_init__(self):
        domain = tuple(self.domain)
        if not domain:
            raise ValueError("an interpretation needs a non-empty domain")
        if len(set(domain)) != len(domain):
            raise ValueError("duplicate individuals in domain")
        members = set(domain)
        concepts = {k: frozenset(v) for k, v in self.concepts.items()}
        roles = {k: frozenset(tuple(p) for p in v) for k, v in self.roles.items()}
        for name, ext in concepts.items():
            if not ext <= members:
                raise ValueError(f"extension of {name} leaves the domain: {sorted(ext - members)}")
        for name, ext in roles.items():
            for a, b in ext:
                if a not in members or b not in members:
                    raise ValueError(f"pair ({a},{b}) of role {name} leaves the domain")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "concepts", concepts)
        object.__setattr__(self, "roles", roles)

    @cached_property
    def universe(self) -> FrozenSet[str]:
        return frozenset(self.domain)

    def concept(self, name: str) -> FrozenSet[str]:
        return self.concepts.get(name, frozenset())

    def role(self, name: str) -> FrozenSet[Tuple[str, str]]:
        return self.roles.get(name, frozenset())

    @cached_property
    def _successors(self):
        out = {}
        for name, pairs in self.roles.items():
            succ = {}
            for a, b in pairs:
                succ.setdefault(a, set()).add(b)
            out[name] = {a: frozenset(bs) for a, bs in succ.items()}
        return out

    def successors(self, role: str) -> Dict[str, FrozenSet[str]]:
        return self._successors.get(role, {})

    def signature(self) -> Signature:
        return Signature(tuple(sorted(self.concepts)), tuple(sorted(self.roles)))


def canonical_domain(size: int) -> Tuple[str, ...]:
    return tuple(f"d{i}" for i in range(1, size + 1))


# Evaluation --------------------------------------------------------------------


def evaluate(c: s.Concept, interp: Interpretation, rho: Optional[Valuation] = None) -> FrozenSet[str]:
    """Extension of ``c`` in ``interp`` under valuation ``rho``.

    Atomic names the interpretation does not mention have empty extensions.
    """
    rho = dict(rho or {})
    for name in s.free_variables(c):
        if name not in rho:
            raise UnboundVariable(name)
    for name, ext in rho.items():
        rho[name] = frozenset(ext)
        if not rho[name] <= interp.universe:
            raise ValueError(f"valuation of {name} leaves the domain")
    return _eval(c, interp, rho)


def _eval(c, interp, env):
    dom = interp.universe
    if isinstance(c, s.Var):
        try:
            return env[c.name]
        except KeyError:
            raise UnboundVariable(c.name) from None
    if isinstance(c, s.Atomic):
        return interp.concept(c.name)
    if isinstance(c, s.Top):
        return dom
    if isinstance(c, s.Bot):
        return frozenset()
    if isinstance(c, s.Not):
        return dom - _eval(c.arg, interp, env)
    if isinstance(c, s.And):
        return _eval(c.left, interp, env) & _eval(c.right, interp, env)
    if isinstance(c, s.Or):
        return _eval(c.left, interp, env) | _eval(c.right, interp, env)
    if isinstance(c, s.QUANTIFIERS):
        if not isinstance(c.role, str):
            raise TypeError("complex roles must be desugared before evaluation")
        succ = interp.successors(c.role)
        body = _eval(c.body, interp, env)
        none = frozenset()
        if isinstance(c, s.Exists):
            return frozenset(x for x in interp.domain if succ.get(x, none) & body)
        if isinstance(c, s.Forall):
            return frozenset(x for x in interp.domain if succ.get(x, none) <= body)
        if isinstance(c, s.AtLeast):
            return frozenset(x for x in interp.domain if len(succ.get(x, none) & body) >= c.n)
        return frozenset(x for x in interp.domain if len(succ.get(x, none) & body) <= c.n)
    if isinstance(c, s.BINDERS):
        kind = MU if isinstance(c, s.Mu) else NU
        return _fix(kind, c.var, c.body, interp, env)[0]
    raise TypeError(f"cannot evaluate {type(c).__name__}")


def _fix(kind, x, body, interp, env, check=False):
    def step(e):
        inner = dict(env)
        inner[x] = e
        return _eval(body, interp, inner)

    return kleene(kind, step, interp.universe, check=check)


def fixpoint_approximants(kind, x, body, interp, rho=None, debug=False):
    """Least (``"mu"``) or greatest (``"nu"``) fixpoint of ``E -> body[x/E]``.

    Returns ``(result, trace)`` where ``trace`` lists the approximants from the
    initial one (empty set or whole domain) up to the fixpoint.  ``debug``
    checks the positivity precondition and that the trace is a chain.
    """
    if debug and s.polarity_of(body, x) not in (s.Polarity.POSITIVE, s.Polarity.ABSENT):
        raise NonMonotoneOperator(f"{x} does not occur positively in the body")
    env = dict(rho or {})
    for name in s.free_variables(body) - {x}:
        if name not in env:
            raise UnboundVariable(name)
    return _fix(kind, x, body, interp, {k: frozenset(v) for k, v in env.items()}, check=debug)


def tarski_oracle(kind, x, body, interp, rho=None, cap=4):
    """Brute-force fixpoint over all subsets of the domain (testing oracle)."""
    env = {k: frozenset(v) for k, v in (rho or {}).items()}

    def step(e):
        return _eval(body, interp, {**env, x: e})

    return tarski(kind, step, interp.universe, cap=cap)


# Generated sub-interpretations and TBoxes --------------------------------------------


def reachable(interp: Interpretation, start: str) -> FrozenSet[str]:
    """Elements reachable from ``start`` through any role, ``start`` included."""
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        for succ in interp._successors.values():
            for y in succ.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
    return frozenset(seen)


def generated_sub(interp: Interpretation, rho: Optional[Valuation], start: str):
    """The sub-interpretation and sub-valuation generated by ``start``."""
    if start not in interp.universe:
        raise UnknownIndividual(start)
    keep = reachable(interp, start)
    domain = tuple(x for x in interp.domain if x in keep)
    sub = Interpretation(
        domain,
        {a: ext & keep for a, ext in interp.concepts.items()},
        {r: frozenset(p for p in ext if p[0] in keep and p[1] in keep) for r, ext in interp.roles.items()},
    )
    return sub, {x: frozenset(e) & keep for x, e in (rho or {}).items()}


def first_violation(interp: Interpretation, k: s.TBox) -> Optional[s.Inclusion]:
    for incl in k:
        if not evaluate(incl.lhs, interp) <= evaluate(incl.rhs, interp):
            return incl
    return None


def satisfies_tbox(interp: Interpretation, k: s.TBox) -> bool:
    return first_violation(interp, k) is None


def enumeration_count(sig: Signature, size: int) -> int:
    return 2 ** (size * len(sig.concepts) + size * size * len(sig.roles))


def decode(sig: Signature, size: int, counter: int) -> Interpretation:
    """Interpretation number ``counter`` in the canonical enumeration order.

    Bit ``k * size + i`` of the counter puts ``d(i+1)`` in the k-th concept;
    after all concept bits, bit ``offset + j * size**2 + a * size + b`` puts the
    pair ``(d(a+1), d(b+1))`` in the j-th role.  Bit 0 is least significant.
    """
    dom = canonical_domain(size)
    concepts = {}
    for k, name in enumerate(sig.concepts):
        bits = (counter >> (k * size)) & ((1 << size) - 1)
        concepts[name] = frozenset(dom[i] for i in range(size) if bits >> i & 1)
    offset = size * len(sig.concepts)
    roles = {}
    for j, name in enumerate(sig.roles):
        bits = (counter >> (offset + j * size * size)) & ((1 << size * size) - 1)
        roles[name] = frozenset(
            (dom[p // size], dom[p % size]) for p in range(size * size) if bits >> p & 1
        )
    return Interpretation(dom, concepts, roles)


def enumerate_interpretations(
    sig: Signature, size: int, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[Interpretation]:
    """Every interpretation of ``sig`` over ``d1..d<size>``, in counter order."""
    if size < 1:
        raise ValueError("domain size must be at least 1")
    if size > cap:
        raise CapExceeded(f"domain size {size} exceeds enumeration cap {cap}")
    for counter in range(enumeration_count(sig, size)):
        yield decode(sig, size, counter)


def product(left: Interpretation, right: Interpretation):
    """Product of interpretations over disjoint signatures.

    An element ``(a, b)`` behaves like ``a`` for the symbols of ``left`` and like
    ``b`` for those of ``right``; role edges move one coordinate only.  Returns
    the interpretation and the map from pairs to element names.
    """
    if set(left.concepts) & set(right.concepts) or set(left.roles) & set(right.roles):
        raise ValueError("product needs disjoint signatures")
    if len(right.domain) == 1:
        names = {(a, right.domain[0]): a for a in left.domain}
    elif len(left.domain) == 1:
        names = {(left.domain[0], b): b for b in right.domain}
    else:
        names = {(a, b): f"{a}_{b}" for a in left.domain for b in right.domain}
    domain = tuple(names[a, b] for a in left.domain for b in right.domain)
    concepts, roles = {}, {}
    for name, ext in left.concepts.items():
        concepts[name] = frozenset(names[a, b] for a in ext for b in right.domain)
    for name, ext in right.concepts.items():
        concepts[name] = frozenset(names[a, b] for a in left.domain for b in ext)
    for name, ext in left.roles.items():
        roles[name] = frozenset((names[a, b], names[a2, b]) for a, a2 in ext for b in right.domain)
    for name, ext in right.roles.items():
        roles[name] = frozenset((names[a, b], names[a, b2]) for b, b2 in ext for a in left.domain)
    return Interpretation(domain, concepts, roles), names


# Model files ---------------------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_LINE = re.compile(rf"^\s*(domain|concept|role|label)\s*({_NAME})?\s*:\s*\[(.*)\]\s*$")
_PAIR = re.compile(rf"\(\s*({_NAME})\s*,\s*({_NAME})\s*\)")


def parse_model(text: str) -> Interpretation:
    """Read ``domain: [..]``, ``concept A: [..]`` and ``role R: [(a,b), ..]`` lines.

    ``label`` is accepted as a synonym of ``role`` (Kripke structure files).
    """
    domain = None
    concepts, roles = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if m is None:
            raise ParseError(f"cannot read model line {raw.strip()!r}", lineno, 1)
        kind, name, body = m.groups()
        if kind == "domain":
            if name:
                raise ParseError("domain takes no name", lineno, 1)
            domain = [x.strip() for x in body.split(",") if x.strip()]
        elif name is None:
            raise ParseError(f"{kind} needs a name", lineno, 1)
        elif kind == "concept":
            concepts[name] = frozenset(x.strip() for x in body.split(",") if x.strip())
        else:
            pairs = _PAIR.findall(body)
            if _PAIR.sub("", body).replace(",", "").strip():
                raise ParseError(f"malformed pair list for {name}", lineno, 1)
            roles[name] = frozenset(pairs)
    if domain is None:
        raise ParseError("model file has no domain line", 1, 1)
    try:
        return Interpretation(tuple(domain), concepts, roles)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None


def _ordered(interp, ext):
    return [x for x in interp.domain if x in ext]


def format_model(interp: Interpretation, relation_keyword: str = "role") -> str:
    order = {x: i for i, x in enumerate(interp.domain)}
    lines = [f"domain: [{', '.join(interp.domain)}]"]
    for name in sorted(interp.concepts):
        lines.append(f"concept {name}: [{', '.join(_ordered(interp, interp.concepts[name]))}]")
    for name in sorted(interp.roles):
        pairs = sorted(interp.roles[name], key=lambda p: (order[p[0]], order[p[1]]))
        lines.append(f"{relation_keyword} {name}: [{', '.join(f'({a},{b})' for a, b in pairs)}]")
    return "\n".join(lines) + "\n"


def missing_symbols(c: s.Concept, interp: Interpretation) -> Tuple[list, list]:
    """Atomic concepts and roles used by ``c`` that ``interp`` does not mention."""
    concepts = sorted(s.atomic_concepts(c) - set(interp.concepts))
    roles = sorted(s.atomic_roles(c) - set(interp.roles))
    return concepts, roles
