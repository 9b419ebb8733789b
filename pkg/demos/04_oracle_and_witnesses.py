"""Brute force through the free algebra, and explicit witness terms.

Run: python demos/04_oracle_and_witnesses.py
"""

from __future__ import annotations

from pathlib import Path

from pathmaltsev import algebra as alg
from pathmaltsev import corpus
from pathmaltsev.local import decide
from pathmaltsev.oracle import build_free_algebra, extract_witness_terms, oracle_decide, verify_witness
from pathmaltsev.pattern import parse_condition

HERE = Path(__file__).parent

semilattice = alg.load(HERE / "algebras" / "semilattice.json")
f = build_free_algebra(semilattice)
print("free semilattice on x, y:", [str(f.term_of(c)) for c in f.sub.codes.tolist()])

for name, spec in [("z2", "maltsev"), ("lattice", "majority"), ("lattice", "jonsson:2"), ("z2", "gumm:1")]:
    a = alg.load(HERE / "algebras" / f"{name}.json")
    p = parse_condition(spec)
    res = oracle_decide(a, p)
    w = extract_witness_terms(a, p, result=res)
    ok, _ = verify_witness(a, p, w)
    print(f"\n{name}, {spec}: {res.verdict}, |K| explored {res.stats['k_size']}, witness verified {ok}")
    for i, t in enumerate(w.t, start=1):
        print(f"  t{i}(v1,v2,v3) = {t}")

# the two deciders agree; compare them on a few random algebras
print()
for seed, base in enumerate(sorted(corpus.BASES3)):
    a = corpus.random_reduct(seed, base)
    for spec in ("hm:2", "jonsson:2"):
        p = parse_condition(spec)
        print(f"{a.name:30s} {spec:10s} decide={decide(a, p).verdict:10s} oracle={oracle_decide(a, p).verdict}")
