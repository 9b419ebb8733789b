from __future__ import annotations

import pytest

from pathmaltsev import corpus
from pathmaltsev.algebra import is_idempotent


def test_named_corpus_idempotent():
    for a in corpus.named_corpus() + [corpus.chain_lattice(3), corpus.affine_zn(3), corpus.projection_algebra(3)]:
        assert is_idempotent(a)[0], a.name


def test_random_corpus_shape():
    algebras = corpus.random_corpus()
    assert len(algebras) == 24
    assert {a.size for a in algebras} == {2, 3}
    for a in algebras:
        assert sorted(a.arities) == [2, 3]
        assert is_idempotent(a)[0]


def test_seeds_are_reproducible():
    assert corpus.random_idempotent(3, 5) == corpus.random_idempotent(3, 5)
    assert corpus.random_reduct(9, "median") == corpus.random_reduct(9, "median")
    assert corpus.random_idempotent(3, 5) != corpus.random_idempotent(3, 6)


@pytest.mark.parametrize("base", sorted(corpus.BASES3))
def test_reducts_of_every_base(base):
    a = corpus.random_reduct(1, base)
    assert a.size == 3 and is_idempotent(a)[0]
