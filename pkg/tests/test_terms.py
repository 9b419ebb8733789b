from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathmaltsev import terms
from pathmaltsev.errors import UnboundVariable
from pathmaltsev.terms import App, Var


def test_text_form():
    t = App("m", (terms.var(1), terms.var(1), terms.var(2)))
    assert terms.to_text(t) == "m(v1,v1,v2)"
    assert str(t) == "m(v1,v1,v2)"


def test_parse_roundtrip_nested():
    text = "join(meet(v1,v2),meet(v2,join(v1,v3)))"
    t = terms.parse_term(text)
    assert terms.to_text(t) == text
    assert terms.depth(t) == 3
    assert terms.variables(t) == ["v1", "v2", "v3"]


@pytest.mark.parametrize("bad", ["m(v1,", "m(v1 v2)", "m(v1))", "(v1)", "m(v1,v2"])
def test_parse_rejects(bad):
    with pytest.raises((ValueError, IndexError)):
        terms.parse_term(bad)


def test_eval(semilattice, z2):
    assert terms.eval_term(terms.var(1), semilattice, {"v1": 1}) == 1
    meet = terms.parse_term("meet(v1,v2)")
    assert terms.eval_term(meet, semilattice, {"v1": 1, "v2": 0}) == 0
    m = terms.parse_term("m(v1,v1,v2)")
    assert terms.eval_term(m, z2, {"v1": 1, "v2": 0}) == 0


def test_eval_vectorised(z2):
    m = terms.parse_term("m(v1,v2,v3)")
    x, y, z = np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1]), np.array([1, 1, 1, 0])
    assert terms.eval_term(m, z2, {"v1": x, "v2": y, "v3": z}).tolist() == list(x ^ y ^ z)


def test_unbound_variable(semilattice):
    with pytest.raises(UnboundVariable):
        terms.eval_term(terms.parse_term("meet(v1,v2)"), semilattice, {"v1": 0})


def test_substitute_and_rename():
    t = terms.parse_term("f(v1,g(v2,v1))")
    assert terms.to_text(terms.rename(t, ["x", "y"])) == "f(x,g(y,x))"
    s = terms.substitute(t, {"v1": terms.parse_term("h(v3)")})
    assert terms.to_text(s) == "f(h(v3),g(v2,h(v3)))"


def test_eval_with_interpretation(lattice):
    # the witness symbol t1 is interpreted as the median term
    median = terms.parse_term("join(join(meet(v1,v2),meet(v2,v3)),meet(v1,v3))")
    eq_lhs = terms.parse_term("t1(x,y,x)")
    for x in (0, 1):
        for y in (0, 1):
            assert terms.eval_with(eq_lhs, {"t1": median}, lattice, {"x": x, "y": y}) == x


def test_shared_subterms_evaluate_once(z2):
    # a deep DAG with sharing would be exponential as a tree
    t = terms.var(1)
    for _ in range(200):
        t = App("m", (t, t, terms.var(2)))
    assert terms.eval_term(t, z2, {"v1": 1, "v2": 0}) == 0
    assert terms.depth(t) == 200


_leaf = st.sampled_from(["v1", "v2", "v3"]).map(Var)
_terms = st.recursive(
    _leaf,
    lambda kids: st.tuples(st.sampled_from(["f", "g"]), st.lists(kids, min_size=1, max_size=3)).map(
        lambda p: App(p[0], tuple(p[1]))
    ),
    max_leaves=15,
)


@settings(max_examples=150, deadline=None)
@given(_terms)
def test_text_roundtrip(t):
    assert terms.structurally_equal(terms.parse_term(terms.to_text(t)), t)
