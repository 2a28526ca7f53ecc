import pytest

from mualcq import corpus
from mualcq import syntax as s
from mualcq.models import evaluate, satisfies_tbox
from mualcq.parser import parse_concept

FOO_HP = "nu X. mu Y. (visible and (exists child. Y or forall child. bot)) or (latent and forall child. (visible and X))"


def test_every_bundled_file_parses():
    names = corpus.names()
    assert {"mgm.tbx", "chain.mdl", "foo_hp.tbx", "dag.tbx"} <= set(names)
    for name in names:
        (corpus.tbox if name.endswith(".tbx") else corpus.model)(name)


def test_resolve_prefers_real_paths(tmp_path):
    f = tmp_path / "mgm.tbx"
    f.write_text("a <= b\n")
    assert corpus.resolve(f) == "a <= b\n"
    assert corpus.resolve("somewhere/else/mgm.tbx") == corpus.read("mgm.tbx")
    with pytest.raises(FileNotFoundError):
        corpus.resolve("nope.tbx")


def test_foo_hp_definition_matches_bundled_tbox():
    k = corpus.tbox("foo_hp.tbx")
    lhs, rhs = k.assertions[0]
    assert lhs == s.Atomic("foo_hp")
    assert s.alpha_equivalent(rhs, parse_concept(FOO_HP))


@pytest.mark.parametrize(
    "name, expected",
    [
        # visible root hands the visible form to c2; latent c1 has only visible children
        ("foo_good.mdl", {"r", "c1", "c2", "g1", "g2"}),
        # latent root with a latent child b breaks the pattern at r only
        ("foo_bad.mdl", {"a", "b", "c", "d"}),
    ],
)
def test_foo_hp_classification(name, expected):
    m = corpus.model(name)
    assert evaluate(parse_concept(FOO_HP), m) == expected
    # latent and visible stay disjoint
    assert satisfies_tbox(m, s.TBox(corpus.tbox("foo_hp.tbx").assertions[2:]))


def test_chain_is_a_model_of_the_list_kb():
    m = corpus.model("chain.mdl")
    assert satisfies_tbox(m, corpus.tbox("list.tbx"))
    assert satisfies_tbox(m, corpus.tbox("recursive4.tbx"))


def test_loop_is_a_stream_but_not_a_list():
    m = corpus.model("loop.mdl")
    assert evaluate(corpus.tbox("stream.tbx").assertions[1].lhs, m) == {"s"}
    assert evaluate(corpus.tbox("list.tbx").assertions[1].lhs, m) == frozenset()
