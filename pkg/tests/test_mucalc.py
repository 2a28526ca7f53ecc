import random

from hypothesis import given, settings
import pytest

from mualcq import mucalc as m
from mualcq import syntax as s
from mualcq import corpus
from mualcq.errors import NotATree, NumberRestrictionPresent
from mualcq.generators import ConceptShape, random_concept, random_tree
from mualcq.models import Interpretation, Signature, evaluate
from mualcq.parser import parse_concept

from strategies import concepts, interpretations, seeds

p = m.Atom("p")
MUALC = ConceptShape(concepts=("a", "b"), roles=("r", "s"), depth=4, numbers=False)
TREE_SIG = Signature(("a", "b"), ("r", "s"))
TREE_SHAPE = ConceptShape(concepts=("a", "b"), roles=("r", "s"), depth=3, max_n=3)


def _chain3():
    return m.KripkeStructure(("x", "y", "z"), {"a": {("x", "y"), ("y", "z")}}, {"p": {"x", "y", "z"}})


def test_eval_examples():
    k = m.KripkeStructure(("s", "t"), {"a": {("s", "t")}}, {})
    assert m.eval_mu(m.Diamond("a", m.TRUE), k) == {"s"}
    always = m.Nu("X", m.And(p, m.Box("a", m.Var("X"))))
    assert m.eval_mu(always, _chain3()) == {"x", "y", "z"}
    last = m.KripkeStructure(("x", "y", "z"), {"a": {("x", "y"), ("y", "z")}}, {"p": {"z"}})
    eventually = m.Mu("X", m.Or(p, m.Diamond("a", m.Var("X"))))
    assert m.eval_mu(eventually, last) == {"x", "y", "z"}


def test_translate_q_examples():
    assert m.translate_q(parse_concept("mu X. exists child. X")) == m.Mu("X", m.Diamond("child", m.Var("X")))
    assert m.translate_q(s.TOP) == m.TRUE
    with pytest.raises(NumberRestrictionPresent):
        m.translate_q(parse_concept("atleast 1 r. a"))


def test_kripke_round_trip():
    one = Interpretation(("d1",), {}, {})
    k = m.kripke_of_interpretation(one)
    assert k.states == ("d1",) and k.relations == {}
    chain = corpus.model("chain.mdl")
    kc = m.kripke_of_interpretation(chain)
    assert len(kc.states) == 4 and kc.relations["succ"] == chain.role("succ")
    assert m.interpretation_of_kripke(kc) == chain


def test_check_deterministic_examples():
    assert m.check_deterministic(m.KripkeStructure(("s",), {}, {})) is None
    bad = m.KripkeStructure(("s", "t", "v"), {"a": {("s", "t"), ("s", "v")}}, {})
    assert m.check_deterministic(bad) == m.Violation("a", "s", frozenset({"t", "v"}))


def test_u_zero_and_one():
    phi = s.Atomic("c")
    res = m.translate_u(s.AtLeast(1, "r", phi))
    assert m.alpha_equivalent(res.formula, m.Diamond("r", m.Mu("Z", m.Or(m.Atom("c"), m.Diamond("r_new", m.Var("Z"))))))
    res = m.translate_u(s.AtMost(0, "r", phi))
    assert m.alpha_equivalent(
        res.formula, m.Box("r", m.Nu("Z", m.And(m.Not(m.Atom("c")), m.Box("r_new", m.Var("Z")))))
    )
    assert m.translate_u(s.AtLeast(0, "r", phi)).formula == m.TRUE


def _bstar(a, f, z):
    return m.Nu(z, m.And(f, m.Box(a, m.Var(z))))


def _dstar(a, f, z):
    return m.Mu(z, m.Or(f, m.Diamond(a, m.Var(z))))


def test_displayed_shapes():
    phi = m.Atom("p")
    n = m.Not(phi)
    # at most three phi-states along the chain
    inner = m.Or(n, m.Box("r_new", _bstar("r_new", n, "A")))
    inner = m.Or(n, m.Box("r_new", _bstar("r_new", inner, "B")))
    inner = m.Or(n, m.Box("r_new", _bstar("r_new", inner, "C")))
    expected = m.Box("r", _bstar("r_new", inner, "D"))
    res = m.translate_u(parse_concept("atmost 3 r. p"))
    assert m.alpha_equivalent(res.formula, expected)
    assert res.fresh_roles == {"r": "r_new"}
    # at least three
    inner = m.And(phi, m.Diamond("r_new", _dstar("r_new", phi, "A")))
    inner = m.And(phi, m.Diamond("r_new", _dstar("r_new", inner, "B")))
    expected = m.Diamond("r", _dstar("r_new", inner, "C"))
    assert m.alpha_equivalent(m.translate_u(parse_concept("atleast 3 r. p")).formula, expected)


def test_printed_forms():
    out = m.print_formula(m.translate_u(parse_concept("atleast 3 r. p")).formula)
    assert out == "<r>mu Z3. p & <r_new>(mu Z2. p & <r_new>(mu Z1. p | <r_new>Z1) | <r_new>Z2) | <r_new>Z3"


def test_fresh_names_avoid_collisions():
    assert m.fresh_role_names(["r"], {"r_new"}) == {"r": "r_new2"}
    res = m.translate_u(parse_concept("exists r. r_new"))
    assert res.fresh_roles["r"] != "r_new"


def test_chain_tree_examples():
    one = Interpretation(("x", "y"), {}, {"r": {("x", "y")}})
    k, _ = m.chain_tree_model(one, "x")
    assert k.relations["r"] == {("x", "y")} and k.relations["r_new"] == frozenset()
    three = Interpretation(("x", "z1", "z2", "z3"), {}, {"r": {("x", "z1"), ("x", "z2"), ("x", "z3")}})
    k, _ = m.chain_tree_model(three, "x")
    assert k.relations["r"] == {("x", "z1")}
    assert k.relations["r_new"] == {("z1", "z2"), ("z2", "z3")}
    assert m.check_deterministic(k) is None


def test_not_a_tree():
    cyc = Interpretation(("x", "y"), {}, {"r": {("x", "y"), ("y", "x")}})
    with pytest.raises(NotATree) as err:
        m.chain_tree_model(cyc, "x")
    assert err.value.witness[0] == "cycle"
    dag = Interpretation(("x", "y", "z"), {}, {"r": {("x", "y"), ("x", "z")}, "s": {("y", "z")}})
    with pytest.raises(NotATree) as err:
        m.chain_tree_model(dag, "x")
    assert err.value.witness[:2] == ("parents", "z")


def test_corpus_trees_chain_deterministically():
    for name in ("foo_good.mdl", "foo_bad.mdl", "chain.mdl"):
        i = corpus.model(name)
        k, _ = m.chain_tree_model(i, i.domain[0])
        assert m.check_deterministic(k) is None


# properties ------------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(concepts(MUALC, free=("Y",)), interpretations())
def test_q_coincidence(c, i):
    rho = {"Y": frozenset(i.domain[:1])}
    phi = m.translate_q(c)
    assert m.size(phi) == s.size(c)
    assert m.is_well_formed(phi)
    assert m.eval_mu(phi, m.kripke_of_interpretation(i), rho) == evaluate(c, i, rho)


@settings(max_examples=150, deadline=None)
@given(seeds, seeds)
def test_u_preserved_on_trees(tseed, cseed):
    i = random_tree(random.Random(tseed), TREE_SIG)
    c = random_concept(random.Random(cseed), TREE_SHAPE)
    res = m.translate_u(c)
    assert m.is_well_formed(res.formula)
    assert m.labels(res.formula) <= s.atomic_roles(c) | set(res.fresh_roles.values())
    k, states = m.chain_tree_model(i, "d1", res.fresh_roles)
    assert m.check_deterministic(k) is None
    ext, uext = evaluate(c, i), m.eval_mu(res.formula, k)
    for x in i.domain:
        assert (x in ext) == (states[x] in uext)
    back = m.collapse_deterministic(k, res.fresh_roles)
    assert evaluate(c, back) == ext


@settings(max_examples=100, deadline=None)
@given(interpretations(Signature(("p",), ("a",)), max_size=4))
def test_star_abbreviations_match_graph_reachability(i):
    k = m.kripke_of_interpretation(i)
    ex = m._Expander(())
    succ = i.successors("a")

    def reach(x):
        seen, todo = {x}, [x]
        while todo:
            for y in succ.get(todo.pop(), ()):
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    good = i.concept("p")
    assert m.eval_mu(ex.box_star("a", p), k) == {x for x in i.domain if reach(x) <= good}
    assert m.eval_mu(ex.diamond_star("a", p), k) == {x for x in i.domain if reach(x) & good}
