"""Randomized property suites.

Each suite returns a :class:`SuiteReport`; a report with violations means a
bug in this package, since every property checked is a theorem about the
semantics.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, List, Optional

from . import mucalc
from . import syntax as s
from .fixpoint import MU, NU
from .generators import ConceptShape, random_concept, random_interpretation, random_tree, random_valuation
from .models import (
    Interpretation,
    Signature,
    evaluate,
    fixpoint_approximants,
    generated_sub,
    tarski_oracle,
)
from .search import find_models


@dataclass
class SuiteReport:
    name: str
    instances: int = 0
    checks: Counter = field(default_factory=Counter)
    skipped: Counter = field(default_factory=Counter)
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, law: str, detail: str):
        self.violations.append(f"{law}: {detail}")

    def summary(self) -> str:
        parts = ", ".join(f"{k}={v}" for k, v in sorted(self.checks.items()))
        status = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        return f"{self.name}: {self.instances} instances, {status} ({parts})"


# Model sets ------------------------------------------------------------------------


def models_of(k: Optional[s.TBox], sig: Signature, max_size: int, rooted: bool = False) -> List[Interpretation]:
    """All models of ``k`` over ``sig`` with at most ``max_size`` elements.

    With ``rooted`` only models generated by ``d1`` are kept; by the
    generated sub-interpretation property these already contain a
    counterexample to any inclusion that has one.
    """
    axioms = [s.Or(s.Not(lhs), rhs) for lhs, rhs in (k or ())]
    out = []
    for size in range(1, max_size + 1):
        out.extend(find_models(sig, size, axioms, None, rooted))
    return out


def _entails(models, c, d, var=None):
    """``c`` is included in ``d`` on every model, for every value of ``var``."""
    for m in models:
        if var is None:
            if not evaluate(c, m) <= evaluate(d, m):
                return False
            continue
        for e in _subsets(m.domain):
            rho = {var: e}
            if not evaluate(c, m, rho) <= evaluate(d, m, rho):
                return False
    return True


def _subsets(domain):
    n = len(domain)
    for bits in range(1 << n):
        yield frozenset(domain[i] for i in range(n) if bits >> i & 1)


def check_monotone_binder(models, c, d, var, kind) -> str:
    """If ``c`` is included in ``d`` for all values of ``var``, then binding
    ``var`` with the same fixpoint on both sides keeps the inclusion.

    Returns ``"premise-fails"``, ``"holds"`` or ``"violated"``.
    """
    if not _entails(models, c, d, var):
        return "premise-fails"
    binder = s.Mu if kind == MU else s.Nu
    return "holds" if _entails(models, binder(var, c), binder(var, d)) else "violated"


def check_monotone_context(models, c1, c2, context, var) -> str:
    """If ``c1`` is included in ``c2``, then plugging both into ``context``
    keeps (positive occurrence) or reverses (negative occurrence) the
    inclusion.  Returns ``"premise-fails"``, ``"mixed"``, ``"holds"`` or
    ``"violated"``.
    """
    if not _entails(models, c1, c2):
        return "premise-fails"
    pol = s.polarity_of(context, var)
    d1, d2 = s.substitute(context, var, c1), s.substitute(context, var, c2)
    if pol in (s.Polarity.POSITIVE, s.Polarity.ABSENT):
        good = _entails(models, d1, d2)
    elif pol == s.Polarity.NEGATIVE:
        good = _entails(models, d2, d1)
    else:
        return "mixed"
    return "holds" if good else "violated"


# Monotonicity suites --------------------------------------------------------------

_SIG = Signature(("a", "b"), ("r",))
_SHAPE = ConceptShape(concepts=("a", "b"), roles=("r",), depth=2, max_n=2)


def theorem_suite(samples: int = 200, seed: int = 0, max_size: int = 2) -> SuiteReport:
    """Monotonicity of binders and of contexts on random instances.

    Instances alternate between the two properties.  Half of them are built
    so that the premise holds by construction (weakening a conjunction or
    strengthening a disjunction, or a TBox asserting the premise); the
    premise is still checked, never assumed.
    """
    rng = random.Random(seed)
    report = SuiteReport("theorems")
    cache = {}

    def models(k):
        key = k.assertions
        if key not in cache:
            cache[key] = models_of(k, _SIG, max_size)
        return cache[key]

    for i in range(samples):
        report.instances += 1
        if i % 2 == 0:
            kind = rng.choice((MU, NU))
            e = random_concept(rng, _SHAPE, positive=("X",))
            f = random_concept(rng, _SHAPE, positive=("X",))
            mode = rng.randrange(4)
            k = s.TBox()
            if mode == 0:
                c, d = s.And(e, f), e
            elif mode == 1:
                c, d = e, s.Or(e, f)
            elif mode == 2:
                k = s.TBox(((s.Atomic("a"), s.Atomic("b")),))
                c, d = s.And(e, s.Atomic("a")), s.And(e, s.Atomic("b"))
            else:
                c, d = e, f
            outcome = check_monotone_binder(models(k), c, d, "X", kind)
            law = "binder"
        else:
            c1 = random_concept(rng, _SHAPE)
            c2 = random_concept(rng, _SHAPE)
            mode = rng.randrange(3)
            k = s.TBox()
            if mode == 0:
                c1 = s.And(c1, c2)
            elif mode == 1:
                k = s.TBox(((c1, c2),))
            ctx = random_concept(rng, ConceptShape(("a", "b"), ("r",), depth=3, max_n=2), free=("X",))
            if "X" not in s.free_variables(ctx):
                ctx = s.And(ctx, s.Var("X")) if rng.random() < 0.5 else s.Or(ctx, s.Not(s.Var("X")))
            outcome = check_monotone_context(models(k), c1, c2, ctx, "X")
            law = "context"
        if outcome == "violated":
            report.fail(law, f"instance {i}")
        elif outcome == "holds":
            report.checks[law] += 1
        else:
            report.skipped[f"{law}:{outcome}"] += 1
    return report


# Algebraic laws ---------------------------------------------------------------------


def _with_var(rng, c, var):
    """Make sure ``var`` occurs (positively) in ``c``."""
    if var in s.free_variables(c):
        return c
    role = rng.choice(_LAW_SIG.roles)
    return rng.choice((s.Or, s.And))(c, s.Exists(role, s.Var(var)))


_LAW_SIG = Signature(("a", "b"), ("r", "s"))


def law_suite(samples: int = 1000, seed: int = 0, max_size: int = 4, depth: int = 4) -> SuiteReport:
    """Equational laws of the semantics on random (concept, interpretation,
    valuation) triples: fixpoint unfolding, the duality of the two binders,
    least below greatest, vacuous binders, renaming of bound variables, the
    derived-constructor equalities and the substitution lemma."""
    rng = random.Random(seed)
    shape = ConceptShape(("a", "b"), ("r", "s"), depth=depth, max_n=3)
    report = SuiteReport("laws")
    for i in range(samples):
        report.instances += 1
        interp = random_interpretation(rng, _LAW_SIG, rng.randint(1, max_size))
        rho = random_valuation(rng, interp, ("Y", "X1"))
        body = _with_var(rng, random_concept(rng, shape, free=("Y",), positive=("X",)), "X")
        plain = random_concept(rng, shape, free=("Y",))
        binder = rng.choice((s.Mu, s.Nu))
        fix = binder("X", body)

        def same(law, left, right, env=rho):
            report.checks[law] += 1
            a, b = evaluate(left, interp, env), evaluate(right, interp, env)
            if a != b:
                report.fail(law, f"#{i}: {left} vs {right}: {sorted(a)} != {sorted(b)}")

        same("unfold", fix, s.substitute(body, "X", fix))
        same("duality", fix, s.dual_fixpoint(fix))
        report.checks["mu-below-nu"] += 1
        if not evaluate(s.Mu("X", body), interp, rho) <= evaluate(s.Nu("X", body), interp, rho):
            report.fail("mu-below-nu", f"#{i}: {body}")
        same("vacuous", binder("X", plain), plain)
        fresh = s.fresh_name("V", s.variable_names(body) | {"Y", "X1"})
        same("alpha", fix, binder(fresh, s.substitute(body, "X", s.Var(fresh))))
        atom = s.Atomic(rng.choice(_LAW_SIG.concepts))
        role = rng.choice(_LAW_SIG.roles)
        n = rng.randint(0, 3)
        same("top", s.TOP, s.Or(atom, s.Not(atom)))
        same("bot", s.BOT, s.Not(s.TOP))
        same("forall", s.Forall(role, plain), s.Not(s.Exists(role, s.Not(plain))))
        same("atmost", s.AtMost(n, role, plain), s.Not(s.AtLeast(n + 1, role, plain)))
        # substitution lemma; the inserted concept mentions X1, a binder name of ``plain``
        inserted = random_concept(rng, ConceptShape(("a", "b"), ("r", "s"), depth=2), free=("X1", "Y"))
        substituted = s.substitute(plain, "Y", inserted)
        report.checks["substitution"] += 1
        env = dict(rho)
        env["Y"] = evaluate(inserted, interp, rho)
        if evaluate(substituted, interp, rho) != evaluate(plain, interp, env):
            report.fail("substitution", f"#{i}: {plain} [Y := {inserted}]")
    return report


# Fixpoint oracle, generated sub-interpretations, translations -----------------------------


def oracle_suite(samples: int = 500, seed: int = 0, max_size: int = 4, depth: int = 4, cap: int = 4) -> SuiteReport:
    """Iterated fixpoints against the brute-force lattice oracle, plus the
    shape of the approximant chains."""
    rng = random.Random(seed)
    shape = ConceptShape(("a", "b"), ("r", "s"), depth=depth, max_n=3)
    report = SuiteReport("oracle")
    for i in range(samples):
        report.instances += 1
        interp = random_interpretation(rng, _LAW_SIG, rng.randint(1, max_size))
        rho = random_valuation(rng, interp, ("Y",))
        body = _with_var(rng, random_concept(rng, shape, free=("Y",), positive=("X",)), "X")
        kind = rng.choice((MU, NU))
        result, trace = fixpoint_approximants(kind, "X", body, interp, rho, debug=True)
        expected = tarski_oracle(kind, "X", body, interp, rho, cap=cap)
        report.checks["agreement"] += 1
        if result != expected:
            report.fail("agreement", f"#{i}: {kind} X. {body}")
        report.checks["chain"] += 1
        pairs = list(zip(trace, trace[1:] + [result]))
        increasing = all(a <= b for a, b in pairs) if kind == MU else all(b <= a for a, b in pairs)
        if not increasing or len(trace) > len(interp.domain) + 1:
            report.fail("chain", f"#{i}: trace of length {len(trace)}")
    return report


def generated_sub_suite(samples: int = 300, seed: int = 0, max_size: int = 4, depth: int = 4) -> SuiteReport:
    """Membership is the same in an interpretation and in the part of it
    generated by any element."""
    rng = random.Random(seed)
    shape = ConceptShape(("a", "b"), ("r", "s"), depth=depth, max_n=3)
    report = SuiteReport("generated-sub")
    for i in range(samples):
        report.instances += 1
        interp = random_interpretation(rng, _LAW_SIG, rng.randint(1, max_size), density=0.25)
        rho = random_valuation(rng, interp, ("Y",))
        c = random_concept(rng, shape, free=("Y",))
        start = rng.choice(interp.domain)
        sub, sub_rho = generated_sub(interp, rho, start)
        whole = evaluate(c, interp, rho)
        part = evaluate(c, sub, sub_rho)
        report.checks["membership"] += 1
        if whole & sub.universe != part:
            report.fail("membership", f"#{i}: {c} from {start}")
    return report


def translation_suite(samples: int = 500, seed: int = 0, max_size: int = 4, depth: int = 4) -> SuiteReport:
    """The structural translation agrees with the concept evaluator and
    preserves size."""
    rng = random.Random(seed)
    shape = ConceptShape(("a", "b"), ("r", "s"), depth=depth, numbers=False)
    report = SuiteReport("translate-q")
    for i in range(samples):
        report.instances += 1
        interp = random_interpretation(rng, _LAW_SIG, rng.randint(1, max_size))
        rho = random_valuation(rng, interp, ("Y",))
        c = random_concept(rng, shape, free=("Y",))
        phi = mucalc.translate_q(c)
        report.checks["coincidence"] += 1
        if evaluate(c, interp, rho) != mucalc.eval_mu(phi, mucalc.kripke_of_interpretation(interp), rho):
            report.fail("coincidence", f"#{i}: {c}")
        report.checks["size"] += 1
        if mucalc.size(phi) != s.size(c):
            report.fail("size", f"#{i}: {c}")
        report.checks["well-formed"] += 1
        if not mucalc.is_well_formed(phi):
            report.fail("well-formed", f"#{i}: {c}")
    return report


def tree_suite(samples: int = 300, seed: int = 0, depth: int = 3, branching: int = 3) -> SuiteReport:
    """On tree-shaped interpretations, a concept and its translation for
    chained structures hold at the same nodes, in both directions."""
    rng = random.Random(seed)
    shape = ConceptShape(("a", "b"), ("r", "s"), depth=3, max_n=3)
    report = SuiteReport("translate-u")
    for i in range(samples):
        report.instances += 1
        tree = random_tree(rng, _LAW_SIG, depth, branching)
        c = random_concept(rng, shape)
        result = mucalc.translate_u(c)
        chained, states = mucalc.chain_tree_model(tree, "d1", result.fresh_roles)
        report.checks["deterministic"] += 1
        if mucalc.check_deterministic(chained) is not None:
            report.fail("deterministic", f"#{i}")
        report.checks["labels"] += 1
        allowed = set(s.atomic_roles(c)) | set(result.fresh_roles.values())
        if not mucalc.labels(result.formula) <= allowed:
            report.fail("labels", f"#{i}: {sorted(mucalc.labels(result.formula))}")
        report.checks["well-formed"] += 1
        if not mucalc.is_well_formed(result.formula):
            report.fail("well-formed", f"#{i}: {c}")
        ext = evaluate(c, tree)
        report.checks["preservation"] += 1
        if {states[x] for x in ext} != mucalc.eval_mu(result.formula, chained):
            report.fail("preservation", f"#{i}: {c}")
        report.checks["collapse"] += 1
        back = mucalc.collapse_deterministic(chained, result.fresh_roles)
        if evaluate(c, back) != ext:
            report.fail("collapse", f"#{i}: {c}")
    return report


SUITES = {
    "theorems": theorem_suite,
    "laws": law_suite,
    "oracle": oracle_suite,
    "generated-sub": generated_sub_suite,
    "translate-q": translation_suite,
    "translate-u": tree_suite,
}


def run_suites(names: Iterable[str], samples: Optional[int] = None, seed: int = 0) -> List[SuiteReport]:
    out = []
    for name in names:
        fn = SUITES[name]
        out.append(fn(seed=seed) if samples is None else fn(samples=samples, seed=seed))
    return out
