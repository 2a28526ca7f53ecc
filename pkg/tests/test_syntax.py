from hypothesis import given, settings
import pytest

from mualcq import syntax as s
from mualcq.errors import NotAFixpoint, WellFormednessError
from mualcq.models import Interpretation, evaluate, enumerate_interpretations, Signature
from mualcq.parser import parse_concept

from strategies import concepts, interpretations

X, Y = s.Var("X"), s.Var("Y")
a, b = s.Atomic("a"), s.Atomic("b")


def test_free_variables_examples():
    assert s.free_variables(X) == {"X"}
    assert s.free_variables(s.Mu("X", s.Exists("r", X))) == frozenset()
    assert s.free_variables(s.Nu("X", s.And(X, Y))) == {"Y"}


def test_substitute_examples():
    assert s.substitute(X, "X", s.TOP) == s.TOP
    assert s.substitute(s.Mu("X", X), "X", a) == s.Mu("X", X)


def test_substitute_avoids_capture():
    c = s.Nu("Y", s.And(X, Y))
    d = s.Exists("r", Y)
    out = s.substitute(c, "X", d)
    assert isinstance(out, s.Nu) and out.var != "Y"
    assert s.alpha_equivalent(out, s.Nu("Y1", s.And(s.Exists("r", Y), s.Var("Y1"))))
    # capture would make the result depend on the bound Y instead of the free one
    i = Interpretation(("p", "q"), {}, {"r": {("p", "q")}})
    rho = {"Y": frozenset({"q"})}
    assert evaluate(out, i, rho) == evaluate(c, i, {**rho, "X": evaluate(d, i, rho)}) == {"p"}


def test_polarity_examples():
    assert s.polarity_of(s.Not(X), "X") is s.Polarity.NEGATIVE
    assert s.polarity_of(s.AtMost(1, "r", X), "X") is s.Polarity.NEGATIVE
    assert s.polarity_of(s.And(X, s.Not(X)), "X") is s.Polarity.BOTH
    assert s.polarity_of(s.AtLeast(2, "r", X), "X") is s.Polarity.POSITIVE
    assert s.polarity_of(a, "X") is s.Polarity.ABSENT
    assert s.polarity_of(s.Not(s.AtMost(0, "r", X)), "X") is s.Polarity.POSITIVE


def test_well_formedness_examples():
    s.check_well_formed(s.Mu("X", s.Exists("r", X)))
    s.check_well_formed(s.Nu("X", s.AtLeast(2, "r", X)))
    with pytest.raises(WellFormednessError) as err:
        s.check_well_formed(s.Mu("X", s.Not(X)))
    assert "X" in str(err.value)


def test_atleast_qualifier_is_monotone_by_brute_force():
    body = s.AtLeast(2, "r", X)
    sig = Signature((), ("r",))
    for i in enumerate_interpretations(sig, 3):
        subs = [frozenset(x for k, x in enumerate(i.domain) if m >> k & 1) for m in range(8)]
        for e1 in subs:
            for e2 in subs:
                if e1 <= e2:
                    assert evaluate(body, i, {"X": e1}) <= evaluate(body, i, {"X": e2})


def test_dual_fixpoint_example():
    c = s.Nu("X", s.Exists("r", X))
    assert s.dual_fixpoint(c) == s.Not(s.Mu("X", s.Not(s.Exists("r", s.Not(X)))))
    with pytest.raises(NotAFixpoint):
        s.dual_fixpoint(a)


def test_dual_of_identity_least_fixpoint_is_empty():
    c = s.dual_fixpoint(s.Mu("X", X))
    for i in enumerate_interpretations(Signature(("a",), ("r",)), 2):
        assert evaluate(c, i) == frozenset()


def test_fresh_name_skips_used():
    assert s.fresh_name("X", {"X", "X1"}) not in {"X", "X1"}


def test_derived_builders():
    assert s.conj() == s.TOP and s.disj() == s.BOT
    assert s.conj(a) == a
    assert s.size(s.conj(a, b, a)) == 5


def _fixpoints(c):
    return [d for d in s.subconcepts(c) if isinstance(d, s.BINDERS)]


@settings(max_examples=150, deadline=None)
@given(concepts(), interpretations())
def test_dual_fixpoint_preserves_extension(c, i):
    for f in _fixpoints(c):
        if s.free_variables(f):
            continue
        d = s.dual_fixpoint(f)
        s.check_well_formed(d)
        assert evaluate(d, i) == evaluate(f, i)


@settings(max_examples=150, deadline=None)
@given(concepts(positive=("Y",)), interpretations())
def test_positivity_soundness(c, i):
    assert s.polarity_of(c, "Y") in (s.Polarity.POSITIVE, s.Polarity.ABSENT)
    dom = i.domain
    small = frozenset(dom[: len(dom) // 2])
    big = frozenset(dom)
    assert evaluate(c, i, {"Y": small}) <= evaluate(c, i, {"Y": big})
    assert evaluate(s.Not(c), i, {"Y": big}) <= evaluate(s.Not(c), i, {"Y": small})


@settings(max_examples=150, deadline=None)
@given(concepts(free=("Y",)), concepts(free=("Y",)), interpretations())
def test_substitution_semantics(c, d, i):
    c = s.Or(c, s.Var("Y"))
    for x in i.domain:
        rho = {"Y": frozenset({x})}
        lhs = evaluate(s.substitute(c, "Y", d), i, rho)
        rhs = evaluate(c, i, {**rho, "Y": evaluate(d, i, rho)})
        assert lhs == rhs


@settings(max_examples=100, deadline=None)
@given(concepts(), interpretations())
def test_alpha_renaming_preserves_extension(c, i):
    for f in _fixpoints(c):
        if s.free_variables(f):
            continue
        new = s.fresh_name("W", s.variable_names(f))
        g = s.rename_bound(f, f.var, new)
        assert g.var == new
        assert s.alpha_equivalent(f, g)
        assert evaluate(g, i) == evaluate(f, i)


def test_alpha_equivalence_respects_binding_structure():
    assert s.alpha_equivalent(s.Mu("X", s.Nu("Y", X)), s.Mu("A", s.Nu("B", s.Var("A"))))
    assert not s.alpha_equivalent(s.Mu("X", s.Nu("Y", X)), s.Mu("A", s.Nu("B", s.Var("B"))))
    assert not s.alpha_equivalent(s.Mu("X", X), s.Nu("X", X))


def test_closed_concepts_ignore_valuation():
    c = parse_concept("mu X. a or exists r. X")
    i = Interpretation(("p", "q"), {"a": {"q"}}, {"r": {("p", "q")}})
    assert evaluate(c, i, {"Y": frozenset()}) == evaluate(c, i, {"Y": frozenset({"p"})})


@settings(max_examples=60, deadline=None)
@given(interpretations())
def test_star_desugaring_matches_reachability(i):
    c = parse_concept("exists (r*). a")
    succ = i.successors("r")
    targets = i.concept("a")

    def reaches(x):
        seen, todo = {x}, [x]
        while todo:
            y = todo.pop()
            for z in succ.get(y, ()):
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
        return bool(seen & targets)

    assert evaluate(c, i) == {x for x in i.domain if reaches(x)}
