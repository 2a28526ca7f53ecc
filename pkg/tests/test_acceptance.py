"""Acceptance criteria, one check per criterion, each under its time budget.

Run with ``pytest tests/test_acceptance.py`` or directly with
``python3 tests/test_acceptance.py``; both print one PASS/FAIL line per
criterion.
"""
import sys
import time

import pytest

from mualcq import corpus, mucalc, suites
from mualcq import mucalc as m
from mualcq import syntax as s
from mualcq.models import Signature, enumerate_interpretations, evaluate, satisfies_tbox
from mualcq.parser import parse_concept
from mualcq.reasoning import SEARCH_CAP, HoldsUpTo, Refuted, Satisfiable, UnknownUpTo, implies_bounded, sat_bounded

FOO_HP = "nu X. mu Y. (visible and (exists child. Y or forall child. bot)) or (latent and forall child. (visible and X))"


def descent_is_empty():
    c = parse_concept("mu X. exists child. X")
    for n in range(1, SEARCH_CAP + 1):
        assert sat_bounded(c, n) == UnknownUpTo(n)
    seen = 0
    for size in (1, 2):
        for i in enumerate_interpretations(Signature((), ("child",)), size):
            assert evaluate(c, i) == frozenset()
            seen += 1
    assert seen == 2 + 16


def stream_self_loop():
    v = sat_bounded(parse_concept("nu X. exists succ. X"), 1)
    assert isinstance(v, Satisfiable)
    assert v.witness.domain == ("d1",) and v.witness.role("succ") == {("d1", "d1")}


def mgm_subsumption():
    k = corpus.tbox("mgm.tbx")
    for animal in ("human", "horse"):
        assert implies_bounded(k, s.Atomic(animal), s.Atomic("mgm"), 3, "both") == HoldsUpTo(3, "both")
    k0 = corpus.tbox("human_horse.tbx")
    v = implies_bounded(k0, s.Atomic("human"), s.Atomic("horse"), 3, "both")
    assert isinstance(v, Refuted)
    assert satisfies_tbox(v.counter_model, k0)
    assert v.element in evaluate(s.Atomic("human"), v.counter_model) - evaluate(s.Atomic("horse"), v.counter_model)


def dag_of_students():
    c, d = s.Atomic("dag_of_student"), s.Atomic("dag_of_person")
    assert implies_bounded(corpus.tbox("dag.tbx"), c, d, 3).kind == "holds"
    assert implies_bounded(corpus.tbox("dag_unrelated.tbx"), c, d, 3).kind == "refuted"


def _clean(report, expected_instances):
    assert report.instances == expected_instances
    assert report.ok, report.violations[:5]


def algebraic_laws():
    r = suites.law_suite(1000, max_size=4, depth=4)
    _clean(r, 1000)
    assert set(r.checks) >= {"unfold", "duality", "mu-below-nu", "vacuous", "alpha", "forall", "atmost", "substitution"}


def tarski_oracle_agreement():
    r = suites.oracle_suite(500, max_size=4)
    _clean(r, 500)
    assert r.checks["agreement"] == r.checks["chain"] == 500


def generated_sub_membership():
    _clean(suites.generated_sub_suite(300), 300)


def q_coincidence():
    r = suites.translation_suite(500)
    _clean(r, 500)
    assert r.checks["size"] == 500


def _bstar(a, f, z):
    return m.Nu(z, m.And(f, m.Box(a, m.Var(z))))


def _dstar(a, f, z):
    return m.Mu(z, m.Or(f, m.Diamond(a, m.Var(z))))


def tree_translation():
    r = suites.tree_suite(300, depth=3, branching=3)
    _clean(r, 300)
    p, n = m.Atom("p"), m.Not(m.Atom("p"))
    nest = n
    for z in "ABC":
        nest = m.Or(n, m.Box("r_new", _bstar("r_new", nest, z)))
    at_most = m.Box("r", _bstar("r_new", nest, "D"))
    nest = p
    for z in "AB":
        nest = m.And(p, m.Diamond("r_new", _dstar("r_new", nest, z)))
    at_least = m.Diamond("r", _dstar("r_new", nest, "C"))
    assert mucalc.alpha_equivalent(m.translate_u(parse_concept("atmost 3 r. p")).formula, at_most)
    assert mucalc.alpha_equivalent(m.translate_u(parse_concept("atleast 3 r. p")).formula, at_least)


def monotonicity_theorems():
    r = suites.theorem_suite(200)
    _clean(r, 200)
    assert r.checks["binder"] > 0 and r.checks["context"] > 0


def foo_hereditary_pattern():
    c = parse_concept(FOO_HP)
    good, bad = corpus.model("foo_good.mdl"), corpus.model("foo_bad.mdl")
    assert evaluate(c, good) == {"r", "c1", "c2", "g1", "g2"}
    assert evaluate(c, bad) == {"a", "b", "c", "d"}
    assert "r" in evaluate(c, good) and "r" not in evaluate(c, bad)


CRITERIA = [
    ("least fixpoint of exists child is empty", descent_is_empty, 1.0),
    ("greatest fixpoint stream has a self-loop witness", stream_self_loop, 1.0),
    ("human and horse below mgm; K0 does not make humans horses", mgm_subsumption, 60.0),
    ("DAGs of students are DAGs of persons", dag_of_students, 60.0),
    ("algebraic laws, 1000 triples", algebraic_laws, 120.0),
    ("iterated fixpoints match the lattice oracle, 500 instances", tarski_oracle_agreement, 120.0),
    ("generated sub-interpretations, 300 instances", generated_sub_membership, 120.0),
    ("structural translation coincidence, 500 concepts", q_coincidence, 120.0),
    ("chained tree translation, 300 trees, displayed shapes", tree_translation, 120.0),
    ("binder and context monotonicity, 200 instances", monotonicity_theorems, 120.0),
    ("foo_hp classifies the two family trees", foo_hereditary_pattern, 1.0),
]


def check(name, fn, budget):
    start = time.perf_counter()
    error = None
    try:
        fn()
    except Exception as exc:  # any error fails the criterion
        error = exc
    elapsed = time.perf_counter() - start
    if error is None and elapsed > budget:
        error = AssertionError(f"took {elapsed:.2f}s, budget {budget:.0f}s")
    status = "PASS" if error is None else "FAIL"
    line = f"{status}  {name}  ({elapsed:.2f}s / {budget:g}s)"
    if error is not None:
        line += f"  {error}"
    return error, line


@pytest.mark.parametrize("name, fn, budget", CRITERIA, ids=[c[1].__name__ for c in CRITERIA])
def test_criterion(name, fn, budget, capsys):
    error, line = check(name, fn, budget)
    with capsys.disabled():
        print(f"\n{line}")
    if error is not None:
        raise error


def main():
    failed = 0
    for name, fn, budget in CRITERIA:
        error, line = check(name, fn, budget)
        print(line)
        failed += error is not None
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
