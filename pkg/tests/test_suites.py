import pytest

from mualcq import models, suites
from mualcq import syntax as s
from mualcq.fixpoint import MU
from mualcq.models import Signature
from mualcq.parser import parse_concept, parse_tbox


@pytest.mark.parametrize("name", sorted(suites.SUITES))
def test_small_runs_are_clean_and_deterministic(name):
    a = suites.SUITES[name](samples=30, seed=7)
    b = suites.SUITES[name](samples=30, seed=7)
    assert a.ok, a.violations
    assert a.summary() == b.summary()
    assert sum(a.checks.values()) > 0


def test_dag_template_instance():
    k = parse_tbox("student <= person")
    sig = Signature(("emptydag", "person", "student"), ("arc",))
    ms = suites.models_of(k, sig, 2)
    body = "emptydag or ({} and exists arc. top and forall arc. X)"
    c = parse_concept("free X; " + body.format("student"))
    d = parse_concept("free X; " + body.format("person"))
    assert suites.check_monotone_binder(ms, c, d, "X", MU) == "holds"


def test_context_examples():
    ms = suites.models_of(None, Signature(("a",), ("r",)), 2)
    x = s.Var("X")
    assert suites.check_monotone_context(ms, s.BOT, s.Atomic("a"), s.Not(x), "X") == "holds"
    assert suites.check_monotone_context(ms, s.BOT, s.Atomic("a"), s.Atomic("a"), "X") == "holds"
    assert suites.check_monotone_context(ms, s.BOT, s.Atomic("a"), s.And(x, s.Not(x)), "X") == "mixed"
    assert suites.check_monotone_context(ms, s.Atomic("a"), s.BOT, x, "X") == "premise-fails"


def test_broken_counting_is_caught(monkeypatch):
    real = models._eval

    def broken(c, interp, env):
        if isinstance(c, s.AtMost):
            return real(s.AtMost(c.n + 1, c.role, c.body), interp, env)
        return real(c, interp, env)

    monkeypatch.setattr(models, "_eval", broken)
    assert not suites.law_suite(samples=100).ok


def test_early_stopping_iteration_is_caught(monkeypatch):
    real = models._fix

    def one_step(kind, x, body, interp, env, check=False):
        start = frozenset() if kind == MU else frozenset(interp.domain)
        return real(kind, x, body, interp, env, check) if len(interp.domain) < 2 else (
            models._eval(body, interp, {**env, x: start}),
            [start],
        )

    monkeypatch.setattr(models, "_fix", one_step)
    assert not suites.oracle_suite(samples=100).ok
