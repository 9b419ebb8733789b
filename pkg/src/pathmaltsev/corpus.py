"""Small named algebras and seeded random idempotent algebras.

Random algebras on three elements come in two flavours.
:func:`random_idempotent` fills tables uniformly; such algebras almost always
generate every idempotent operation, so the free-algebra oracle cannot finish
on them.  :func:`random_reduct` instead draws each operation as a random term
over a small structured base (a lattice, an affine space, a semilattice,
...), which keeps the clone and hence K(A) small.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .algebra import Algebra


def _table(f, size: int, arity: int) -> list[int]:
    return [f(*args) for args in product(range(size), repeat=arity)]


def semilattice2() -> Algebra:
    return Algebra.from_tables(2, [("meet", 2, [0, 0, 0, 1])], name="semilattice2")


def lattice2() -> Algebra:
    return Algebra.from_tables(2, [("meet", 2, [0, 0, 0, 1]), ("join", 2, [0, 1, 1, 1])], name="lattice2")


def z2_minority() -> Algebra:
    return Algebra.from_tables(2, [("m", 3, _table(lambda x, y, z: x ^ y ^ z, 2, 3))], name="z2")


def trivial1() -> Algebra:
    return Algebra.from_tables(1, [("f", 2, [0])], name="trivial1")


def chain_lattice(n: int = 3) -> Algebra:
    return Algebra.from_tables(n, [("meet", 2, _table(min, n, 2)), ("join", 2, _table(max, n, 2))], name=f"chain{n}")


def affine_zn(n: int = 3) -> Algebra:
    return Algebra.from_tables(n, [("p", 3, _table(lambda x, y, z: (x - y + z) % n, n, 3))], name=f"affine_z{n}")


def projection_algebra(n: int = 3) -> Algebra:
    return Algebra.from_tables(n, [("left", 2, _table(lambda x, y: x, n, 2))], name=f"left_zero{n}")


_RPS = {(0, 1): 1, (1, 0): 1, (1, 2): 2, (2, 1): 2, (0, 2): 0, (2, 0): 0}

# generator ops for the bases of random reducts on three elements
BASES3 = {
    "chain": [(2, min), (2, max)],
    "affine": [(3, lambda x, y, z: (x - y + z) % 3), (2, lambda x, y: (2 * x + 2 * y) % 3)],
    "semilattice": [(2, min)],
    "flat": [(2, lambda x, y: x if x == y else 0)],
    "rock_paper_scissors": [(2, lambda x, y: x if x == y else _RPS[(x, y)])],
    "dual_discriminator": [(3, lambda x, y, z: x if x == y else z)],
    "median": [(3, lambda x, y, z: sorted((x, y, z))[1])],
}


def named_corpus() -> list[Algebra]:
    return [semilattice2(), lattice2(), z2_minority(), trivial1()]


def _idempotent_table(rng: np.random.Generator, size: int, arity: int) -> list[int]:
    t = rng.integers(0, size, size=size**arity)
    step = sum(size**j for j in range(arity))
    for e in range(size):
        t[e * step] = e
    return t.tolist()


def random_idempotent(size: int, seed: int, arities=(2, 3)) -> Algebra:
    """Uniformly random idempotent tables, one operation per entry of ``arities``."""
    rng = np.random.default_rng(seed)
    ops = [(f"f{i}", r, _idempotent_table(rng, size, r)) for i, r in enumerate(arities)]
    return Algebra.from_tables(size, ops, name=f"rand{size}_{seed}")


def _random_term_table(rng, base, size: int, arity: int, depth: int) -> list[int]:
    def build(d):
        # leaves are projections; inner nodes apply a random base operation
        if d == 0 or rng.random() < 0.25:
            j = int(rng.integers(arity))
            return lambda args: args[j]
        r, f = base[int(rng.integers(len(base)))]
        kids = [build(d - 1) for _ in range(r)]
        return lambda args: f(*(k(args) for k in kids))

    t = build(depth)
    return [t(args) for args in product(range(size), repeat=arity)]


def random_reduct(seed: int, base: str | None = None, depth: int = 3) -> Algebra:
    """Three-element algebra with a random binary and a random ternary term operation of a base."""
    rng = np.random.default_rng(seed)
    if base is None:
        base = sorted(BASES3)[int(rng.integers(len(BASES3)))]
    ops = BASES3[base]
    f = _random_term_table(rng, ops, 3, 2, depth)
    g = _random_term_table(rng, ops, 3, 3, depth)
    return Algebra.from_tables(3, [("f", 2, f), ("g", 3, g)], name=f"reduct_{base}_{seed}")


def random_corpus(n2: int = 12, n3: int = 12, seed: int = 2024) -> list[Algebra]:
    """Seeded random corpus: uniform algebras on two elements, reducts on three."""
    out = [random_idempotent(2, seed + i) for i in range(n2)]
    names = sorted(BASES3)
    out += [random_reduct(seed + 100 + i, base=names[i % len(names)]) for i in range(n3)]
    return out
