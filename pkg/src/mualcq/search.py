"""Backtracking model finder with three-valued pruning.

Interpretations over ``d1..dn`` are built one bit at a time in the order of
:func:`search_order`, trying 0 before 1, so models come out sorted by
:func:`order_key`.  Fixing everything about ``d1`` first lets the goal and
the reachability requirement cut branches early.  A partial interpretation is represented by two bitmask bounds per symbol:
``lo`` holds the bits fixed to 1, ``hi`` the bits not yet fixed to 0.  Every
concept is evaluated to an interval ``(lo, hi)`` that contains its extension
in every completion; a branch is cut as soon as some constraint can no
longer hold.  Fixpoints iterate the pair of bounds together, which stays
sound because both bound operators are monotone when the bound variable
occurs positively.
"""
from __future__ import annotations

from itertools import count
from operator import itemgetter
from typing import Iterator, Optional, Sequence

from . import syntax as s
from .errors import InternalError
from .models import Interpretation, Signature, canonical_domain

_stamps = count(1)


class _State:
    def __init__(self, n, nconcepts, nroles):
        self.n = n
        self.full = (1 << n) - 1
        self.clo = [0] * nconcepts
        self.chi = [self.full] * nconcepts
        self.slo = [[0] * n for _ in range(nroles)]
        self.shi = [[self.full] * n for _ in range(nroles)]
        # one stamp per symbol (concepts first, then roles); changes on every edit
        self.stamp = [0] * (nconcepts + nroles)


def _compile(c, cidx, ridx):
    """Turn ``c`` into a function ``(state, env) -> (lo, hi)``."""
    if isinstance(c, s.Atomic):
        if c.name not in cidx:
            return lambda st, env: (0, 0)
        k = cidx[c.name]
        return lambda st, env: (st.clo[k], st.chi[k])
    if isinstance(c, s.Var):
        name = c.name
        return lambda st, env: env[name]
    if isinstance(c, s.Top):
        return lambda st, env: (st.full, st.full)
    if isinstance(c, s.Bot):
        return lambda st, env: (0, 0)
    if isinstance(c, s.Not):
        arg = _compile(c.arg, cidx, ridx)

        def neg(st, env):
            lo, hi = arg(st, env)
            return st.full & ~hi, st.full & ~lo

        return neg
    if isinstance(c, (s.And, s.Or)):
        left = _compile(c.left, cidx, ridx)
        right = _compile(c.right, cidx, ridx)
        if isinstance(c, s.And):
            def both(st, env):
                a, b = left(st, env)
                if not b:
                    return 0, 0
                x, y = right(st, env)
                return a & x, b & y

            return both

        def either(st, env):
            a, b = left(st, env)
            x, y = right(st, env)
            return a | x, b | y

        return either
    if isinstance(c, s.QUANTIFIERS):
        return _compile_quantifier(c, cidx, ridx)
    if isinstance(c, s.BINDERS):
        return _compile_binder(c, cidx, ridx)
    raise TypeError(f"cannot compile {type(c).__name__}")


def _compile_quantifier(c, cidx, ridx):
    body = _compile(c.body, cidx, ridx)
    if c.role not in ridx:
        # no edges at all
        if isinstance(c, s.Exists) or (isinstance(c, s.AtLeast) and c.n > 0):
            return lambda st, env: (0, 0)
        return lambda st, env: (st.full, st.full)
    j = ridx[c.role]
    if isinstance(c, s.Exists):
        def ex(st, env):
            bl, bh = body(st, env)
            slo, shi = st.slo[j], st.shi[j]
            lo = hi = 0
            for x in range(st.n):
                if slo[x] & bl:
                    lo |= 1 << x
                if shi[x] & bh:
                    hi |= 1 << x
            return lo, hi

        return ex
    if isinstance(c, s.Forall):
        def fa(st, env):
            bl, bh = body(st, env)
            slo, shi = st.slo[j], st.shi[j]
            lo = hi = 0
            for x in range(st.n):
                if not shi[x] & ~bl:
                    lo |= 1 << x
                if not slo[x] & ~bh:
                    hi |= 1 << x
            return lo, hi

        return fa
    n = c.n
    if isinstance(c, s.AtLeast):
        def atleast(st, env):
            bl, bh = body(st, env)
            slo, shi = st.slo[j], st.shi[j]
            lo = hi = 0
            for x in range(st.n):
                if (slo[x] & bl).bit_count() >= n:
                    lo |= 1 << x
                if (shi[x] & bh).bit_count() >= n:
                    hi |= 1 << x
            return lo, hi

        return atleast

    def atmost(st, env):
        bl, bh = body(st, env)
        slo, shi = st.slo[j], st.shi[j]
        lo = hi = 0
        for x in range(st.n):
            if (shi[x] & bh).bit_count() <= n:
                lo |= 1 << x
            if (slo[x] & bl).bit_count() <= n:
                hi |= 1 << x
        return lo, hi

    return atmost


def _compile_binder(c, cidx, ridx):
    body = _compile(c.body, cidx, ridx)
    var = c.var
    least = isinstance(c, s.Mu)

    def fix(st, env):
        cur = (0, 0) if least else (st.full, st.full)
        inner = dict(env)
        # lo and hi each move monotonically through at most n+1 values
        for _ in range(2 * st.n + 2):
            inner[var] = cur
            nxt = body(st, inner)
            if nxt == cur:
                return cur
            cur = nxt
        raise InternalError("interval fixpoint iteration did not stabilise")

    if s.free_variables(c):
        return fix
    syms = [cidx[a] for a in sorted(s.atomic_concepts(c)) if a in cidx]
    syms += [len(cidx) + ridx[r] for r in sorted(s.atomic_roles(c)) if r in ridx]
    if not syms:
        return fix
    stamps_of = itemgetter(*syms)
    memo = [None, None]

    def cached(st, env):
        key = stamps_of(st.stamp)
        if memo[0] != key:
            memo[0] = key
            memo[1] = fix(st, env)
        return memo[1]

    return cached


def _reaches_all(st, nroles):
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for x in range(st.n):
            if frontier >> x & 1:
                for j in range(nroles):
                    nxt |= st.shi[j][x]
        frontier = nxt & ~seen
        seen |= nxt
    return seen == st.full


def search_order(size: int, nconcepts: int, nroles: int) -> list:
    """The order in which bits are fixed: element by element from ``d1``,
    first its membership in each concept, then its outgoing pairs for each role
    (targets in domain order).  Entries are ``(symbol, index, x, y)`` with
    ``y = None`` for concept bits.
    """
    bits = []
    for x in range(size):
        bits += [(k, k, x, None) for k in range(nconcepts)]
        bits += [(nconcepts + j, j, x, y) for j in range(nroles) for y in range(size)]
    return bits


def order_key(interp: Interpretation, sig: Signature) -> tuple:
    """Sort key reproducing the order in which :func:`find_models` yields."""
    dom = interp.domain
    key = []
    for x in dom:
        key += [x in interp.concept(a) for a in sig.concepts]
        key += [(x, y) in interp.role(r) for r in sig.roles for y in dom]
    return tuple(key)


def find_models(
    sig: Signature,
    size: int,
    constraints: Sequence[s.Concept] = (),
    goal: Optional[s.Concept] = None,
    rooted: bool = False,
) -> Iterator[Interpretation]:
    """Interpretations of ``sig`` over ``d1..d<size>``, in search order, where
    every closed concept in ``constraints`` holds everywhere and, if given,
    ``d1`` belongs to ``goal``.  With ``rooted`` only interpretations in which
    every element is reachable from ``d1`` are produced.
    """
    cidx = {a: k for k, a in enumerate(sig.concepts)}
    ridx = {r: j for j, r in enumerate(sig.roles)}
    nc, nr = len(cidx), len(ridx)
    for c in list(constraints) + ([goal] if goal is not None else []):
        extra = (s.atomic_concepts(c) - set(cidx)) | (s.atomic_roles(c) - set(ridx))
        if extra:
            raise ValueError(f"symbols outside the signature: {sorted(extra)}")
        if not s.is_closed(c):
            raise ValueError("search constraints must be closed")
    st = _State(size, nc, nr)
    full = st.full

    # checks[i]: indices of constraints to re-evaluate after editing symbol i;
    # settled[j] is true while constraint j holds in every completion
    checks = [[] for _ in range(nc + nr)]
    tests = []

    def symbols(c):
        return [cidx[a] for a in s.atomic_concepts(c)] + [nc + ridx[r] for r in s.atomic_roles(c)]

    for c, need in [(c, full) for c in constraints] + ([(goal, 1)] if goal is not None else []):
        f = _compile(c, cidx, ridx)
        if not symbols(c):
            if f(st, {})[1] & need != need:
                return
            continue
        for i in symbols(c):
            checks[i].append(len(tests))
        tests.append((f, need))
    settled = [False] * len(tests)

    bits = search_order(size, nc, nr)

    def ok(sym, newly):
        for j in checks[sym]:
            if settled[j]:
                continue
            f, need = tests[j]
            lo, hi = f(st, {})
            if hi & need != need:
                return False
            if lo & need == need:
                settled[j] = True
                newly.append(j)
        return True

    def attempt(sym, p):
        newly = []
        if ok(sym, newly):
            yield from step(p + 1)
        for j in newly:
            settled[j] = False

    def build():
        dom = canonical_domain(size)
        concepts = {a: frozenset(dom[x] for x in range(size) if st.clo[k] >> x & 1) for a, k in cidx.items()}
        roles = {
            r: frozenset((dom[x], dom[y]) for x in range(size) for y in range(size) if st.slo[j][x] >> y & 1)
            for r, j in ridx.items()
        }
        return Interpretation(dom, concepts, roles)

    def step(p):
        if p == len(bits):
            yield build()
            return
        sym, k, x, y = bits[p]
        if y is None:
            b = 1 << x
            st.chi[k] &= ~b
            st.stamp[sym] = next(_stamps)
            yield from attempt(sym, p)
            st.chi[k] |= b
            st.clo[k] |= b
            st.stamp[sym] = next(_stamps)
            yield from attempt(sym, p)
            st.clo[k] &= ~b
        else:
            b = 1 << y
            st.shi[k][x] &= ~b
            st.stamp[sym] = next(_stamps)
            if not rooted or _reaches_all(st, nr):
                yield from attempt(sym, p)
            st.shi[k][x] |= b
            st.slo[k][x] |= b
            st.stamp[sym] = next(_stamps)
            yield from attempt(sym, p)
            st.slo[k][x] &= ~b
        st.stamp[sym] = next(_stamps)

    if rooted and nr == 0 and size > 1:
        return
    yield from step(0)
