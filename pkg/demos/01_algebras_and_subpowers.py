"""Finite algebras, idempotence, and generated subpowers.

Run: python demos/01_algebras_and_subpowers.py
"""

from __future__ import annotations

from pathlib import Path

from pathmaltsev import algebra as alg
from pathmaltsev import closure, terms

HERE = Path(__file__).parent

lattice = alg.load(HERE / "algebras" / "lattice.json")
print(lattice)
print("idempotent:", alg.is_idempotent(lattice))
print("size measure:", alg.size_measure(lattice))

# Sg{(0,1), (1,0)} inside A^2 fills the whole square
sub = closure.generate(lattice, 2, [(0, 1), (1, 0)])
print("\nsubpower of A^2 generated by (0,1), (1,0):")
for t in sub.tuples():
    print(f"  {t}  =  {terms.to_text(sub.term_of(t))}")

# the free lattice on x, y is the subpower of A^4 generated by the two projections
x, y = (0, 0, 1, 1), (0, 1, 0, 1)
free = closure.generate(lattice, 4, [x, y])
print(f"\nfree lattice on two generators has {len(free)} elements:")
for k in range(len(free)):
    print("  ", terms.to_text(free.term_at(k, names=["x", "y"])))

# a failing table, reported with the offending diagonal entries
bad = alg.load(HERE / "algebras" / "not_idempotent.json")
print("\nnot idempotent:", alg.is_idempotent(bad))
