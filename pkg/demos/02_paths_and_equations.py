"""Pattern paths, the gallery of classical conditions, and their equations.

Run: python demos/02_paths_and_equations.py
"""

from __future__ import annotations

from pathmaltsev import pattern

for spec in ["maltsev", "majority", "jonsson:3", "gumm:2", "dir-jonsson:2", "dir-gumm:2", "hm:3"]:
    p = pattern.parse_condition(spec)
    sys_ = pattern.emit_maltsev_condition(p)
    print(f"{spec}  ({p.dsl}, n={p.n}, solid edges={p.k})")
    for line in pattern.eliminate_inner(sys_, p.n).lines():
        print("    ", line)

# any forward dashed edge trivialises the condition: projections satisfy it
p = pattern.parse_path("Fs Fd Bs")
s, t = pattern.trivial_witness(p)
print("\ntrivial path", p.dsl, "-> t =", [str(u) for u in t], " s =", [str(u) for u in s])

# the generators of K(A) form J; J x P is where every walk search starts
gp = pattern.product(pattern.j_digraph(), pattern.gallery("dir-gumm", 2).digraph())
print("\nJ x dir-gumm:2 in DOT:")
print(gp.to_dot("JxP"))
