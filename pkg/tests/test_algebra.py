from __future__ import annotations

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pathmaltsev import algebra as alg
from pathmaltsev.algebra import Algebra
from pathmaltsev.errors import (
    ArityMismatch,
    ElementOutOfRange,
    EmptySignature,
    IdempotenceError,
    MalformedTable,
    NoPositiveArityOperation,
)


def op(name, arity, table):
    return {"name": name, "arity": arity, "table": table}


def test_validate_semilattice():
    a = alg.validate({"size": 2, "operations": [op("meet", 2, [0, 0, 0, 1])]})
    assert a.size == 2
    assert a.arities == (2,)
    assert a.apply("meet", (1, 1)) == 1


@pytest.mark.parametrize(
    "raw, exc",
    [
        ({"size": 2, "operations": [op("f", 2, [0, 0, 0])]}, MalformedTable),
        ({"size": 2, "operations": []}, EmptySignature),
        ({"size": 2, "operations": [op("f", 2, [0, 0, 0, 2])]}, MalformedTable),
        ({"size": 0, "operations": [op("f", 1, [])]}, MalformedTable),
        ({"operations": [op("f", 1, [0])]}, MalformedTable),
        ({"size": 2, "operations": [op("c", 0, [1])]}, NoPositiveArityOperation),
        ({"size": 2, "operations": [op("c", 0, [1]), op("f", 1, [0, 1])]}, IdempotenceError),
    ],
)
def test_validate_rejects(raw, exc):
    with pytest.raises(exc):
        alg.validate(raw)


def test_invalid_algebra_is_value_error():
    with pytest.raises(ValueError):
        alg.validate({"size": 2, "operations": []})


def test_load_roundtrip(tmp_path, lattice):
    path = tmp_path / "lattice.json"
    path.write_text(lattice.to_json())
    assert alg.load(path) == lattice


def test_from_tables_infers_arity():
    a = Algebra.from_tables(3, {"f": [0] * 27})
    assert a.arities == (3,)
    with pytest.raises(MalformedTable):
        Algebra.from_tables(3, {"f": [0] * 10})


def test_idempotence(semilattice, z2):
    assert alg.is_idempotent(semilattice) == (True, [])
    assert alg.is_idempotent(z2) == (True, [])
    const = Algebra.from_tables(2, [("f", 2, [0, 0, 0, 0])])
    ok, violations = alg.is_idempotent(const)
    assert not ok
    assert violations == [("f", 1)]


def test_size_measure(z2, lattice):
    m = alg.size_measure(z2)
    assert (m.value, m.max_arity) == (8, 3)
    assert alg.size_measure(lattice).value == 8
    ident = Algebra.from_tables(3, [("id", 1, [0, 1, 2])])
    assert alg.size_measure(ident).value == 3
    assert alg.size_measure(lattice).counts_by_arity == {2: 2}


def test_apply(semilattice, z2):
    assert semilattice.apply("meet", (0, 1)) == 0
    assert z2.apply(0, (1, 1, 0)) == 0
    assert z2.apply("m", (1, 0, 0)) == 1
    with pytest.raises(ArityMismatch):
        z2.apply("m", (1, 0))
    with pytest.raises(ElementOutOfRange):
        z2.apply("m", (1, 0, 2))
    with pytest.raises(KeyError):
        z2.apply("nope", (0, 0, 0))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.data())
def test_apply_matches_table_lookup(size, arity, data):
    table = data.draw(st.lists(st.integers(0, size - 1), min_size=size**arity, max_size=size**arity))
    a = Algebra.from_tables(size, [("f", arity, table)])
    # naive interpreter: position of args in the lexicographic list of all tuples
    rows = list(product(range(size), repeat=arity))
    args = data.draw(st.sampled_from(rows))
    assert a.apply("f", args) == table[rows.index(args)]


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(0, 5), min_size=1, max_size=12))
def test_encode_decode_roundtrip(size, t):
    t = [x % size for x in t]
    code = alg.encode(t, size)
    assert 0 <= code < size ** len(t)
    assert alg.decode(code, size, len(t)) == tuple(t)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 4), st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_size_measure_at_least_size(size, arities):
    ops = [(f"f{i}", r, [0] * size**r) for i, r in enumerate(arities)]
    a = Algebra.from_tables(size, ops)
    assert alg.size_measure(a).value >= size
    assert alg.size_measure(a).value == sum(size**r for r in arities)


def test_tables_are_read_only(lattice):
    with pytest.raises(ValueError):
        lattice.operations[0].table[0] = 1
    assert isinstance(lattice.operations[0].table, np.ndarray)
