"""The local test: scan every small testing digraph of a path.

A refutation comes with a certificate, which is rebuilt from scratch to
confirm that it really has no P-shaped walk.

Run: python demos/03_local_decider.py
"""

from __future__ import annotations

import json
from pathlib import Path

from pathmaltsev import algebra as alg
from pathmaltsev.local import build_testing_digraph, check_instance, decide
from pathmaltsev.pattern import parse_condition

HERE = Path(__file__).parent

for name in ["z2", "lattice", "semilattice", "chain3"]:
    a = alg.load(HERE / "algebras" / f"{name}.json")
    verdicts = {spec: decide(a, parse_condition(spec)).verdict for spec in
                ["maltsev", "majority", "jonsson:2", "gumm:1", "hm:2", "path:Fs Fd"]}
    print(f"{name:12s}", "  ".join(f"{k}={v}" for k, v in verdicts.items()))

semilattice = alg.load(HERE / "algebras" / "semilattice.json")
p = parse_condition("majority")
report = decide(semilattice, p)
print("\nsemilattice, majority:")
print(json.dumps(report.to_dict(timing=False), indent=2))

g = build_testing_digraph(semilattice, report.counterexample)
print("potatoes:", [B.tuples() for B in g.potatoes])
print("edges:", g.edges(1))
print("walk in the certificate:", check_instance(semilattice, p, report.counterexample))
