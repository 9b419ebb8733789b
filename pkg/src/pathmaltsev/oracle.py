"""Brute-force ground truth through the two-generated free algebra.

The free algebra on ``x, y`` is realised inside ``A^(|A|^2)``: coordinate
``(u, v)`` (pairs in lexicographic order) of ``x`` is ``u`` and of ``y`` is
``v``.  ``K(A)`` is generated inside ``A^(3|A|^2)`` by the concatenated
triples ``(x,x,x)``, ``(y,x,y)``, ``(x,y,y)``; a member ``(e, f, g)`` is an
edge ``f -> g``, solid iff ``e == x``.  The condition of a path holds iff K(A)
has a P-shaped walk from x to y, and the provenance of the edges on such a
walk yields explicit terms.

Adding elements to K can only create walks, so :func:`oracle_decide` checks
for a walk while the closure grows and stops at the first one.  A refutation
needs the complete closure.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import terms
from .algebra import Algebra, is_idempotent
from .closure import DEFAULT_CAP, Subpower, generate
from .errors import CapExceeded, NoWalk, NotIdempotent
from .pattern import (
    PatternDigraph,
    PatternPath,
    emit_maltsev_condition,
    is_trivial,
    trivial_witness,
)

MAX_ORACLE_SIZE = 3
ROLES = {"v1": "x", "v2": "y", "v3": "z"}


def xy_generators(size: int) -> tuple[list[int], list[int]]:
    x = [u for u in range(size) for _ in range(size)]
    y = [v for _ in range(size) for v in range(size)]
    return x, y


def _check_input(a: Algebra, allow_large: bool):
    ok, violations = is_idempotent(a)
    if not ok:
        raise NotIdempotent(violations)
    if a.size > MAX_ORACLE_SIZE and not allow_large:
        raise CapExceeded(
            f"the free-algebra oracle is limited to |A| <= {MAX_ORACLE_SIZE}; pass allow_large to override"
        )


@dataclass
class FreeAlgebra2:
    sub: Subpower
    x: int
    y: int

    def __len__(self):
        return len(self.sub)

    def term_of(self, element) -> terms.Term:
        return self.sub.term_of(element, names=["x", "y"])


def build_free_algebra(a: Algebra, cap: int | None = DEFAULT_CAP, allow_large: bool = False) -> FreeAlgebra2:
    _check_input(a, allow_large)
    x, y = xy_generators(a.size)
    sub = generate(a, a.size**2, [x, y], cap=cap)
    return FreeAlgebra2(sub, sub.codes[0].item(), sub.codes[1 if len(sub) > 1 else 0].item())


@dataclass
class KGraph:
    """K(A) as a subpower, with per-member edge data as F codes."""

    sub: Subpower
    x: int
    y: int

    @property
    def block(self) -> int:
        return self.sub.m // 3

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(solid flag, source code, target code) for every member."""
        q = self.block
        size = self.sub.algebra.size
        pw = np.array([size ** (q - 1 - j) for j in range(q)], dtype=np.int64)
        c = self.sub.coords
        return c[:, :q] @ pw == self.x, c[:, q : 2 * q] @ pw, c[:, 2 * q :] @ pw

    def digraph(self) -> PatternDigraph:
        solid, src, dst = self.edge_arrays()
        verts = sorted(set(src.tolist()) | set(dst.tolist()) | {self.x, self.y})
        g = PatternDigraph(verts, self.x, self.y)
        for s, u, v in zip(solid.tolist(), src.tolist(), dst.tolist()):
            g.add_edge(u, v, s)
        return g


def k_generators(size: int) -> list[list[int]]:
    x, y = xy_generators(size)
    return [x + x + x, y + x + y, x + y + y]


def _code(t, size: int) -> int:
    c = 0
    for v in t:
        c = c * size + v
    return c


def build_k_graph(a: Algebra, cap: int | None = DEFAULT_CAP, allow_large: bool = False, stop=None) -> KGraph:
    _check_input(a, allow_large)
    x, y = xy_generators(a.size)
    sub = generate(a, 3 * a.size**2, k_generators(a.size), cap=cap, stop=stop)
    return KGraph(sub, _code(x, a.size), _code(y, a.size))


def _search(k: KGraph, p: PatternPath):
    """Return ``(walk, rows)`` of a P-shaped walk from x to y, or ``None``.

    ``rows[i-1]`` is the index of the K member realising the walk's i-th edge.
    """
    solid, src, dst = k.edge_arrays()
    reach = np.array([k.x], dtype=np.int64)
    parents = []
    every = np.ones(len(solid), dtype=bool)
    for e in p.edges:
        ok = solid if e.solid else every
        # forward edge f_{i-1} -> f_i; backward edge f_i -> f_{i-1}
        frm, to = (src, dst) if e.forward else (dst, src)
        rows = np.flatnonzero(ok & np.isin(frm, reach))
        if not len(rows):
            return None
        nxt, first = np.unique(to[rows], return_index=True)
        parents.append(dict(zip(nxt.tolist(), rows[first].tolist())))
        reach = nxt
    if k.y not in parents[-1]:
        return None
    walk = [k.y]
    used = []
    for i in range(p.n - 1, -1, -1):
        row = parents[i][walk[-1]]
        used.append(row)
        e = p.edges[i]
        walk.append(int(src[row] if e.forward else dst[row]))
    return walk[::-1], used[::-1]


@dataclass
class OracleResult:
    verdict: str
    walk: list[int] | None
    rows: list[int] | None
    k: KGraph
    stats: dict = field(default_factory=dict)

    @property
    def satisfied(self) -> bool:
        return self.verdict == "satisfied"


def oracle_decide(a: Algebra, p: PatternPath, cap: int | None = DEFAULT_CAP, allow_large: bool = False) -> OracleResult:
    found = {}

    def stop(sub):
        hit = _search(KGraph(sub, kx, ky), p)
        if hit is not None:
            found["hit"] = hit
        return hit is not None

    x, y = xy_generators(a.size)
    kx, ky = _code(x, a.size), _code(y, a.size)
    k = build_k_graph(a, cap=cap, allow_large=allow_large, stop=stop)
    hit = found.get("hit") or _search(k, p)
    stats = {"k_size": len(k.sub), "k_complete": k.sub.complete}
    if hit is None:
        return OracleResult("refuted", None, None, k, stats)
    return OracleResult("satisfied", hit[0], hit[1], k, stats)


@dataclass
class Witness:
    """Terms for s_0..s_n (over x, y) and t_1..t_n (over v1, v2, v3 read as x, y, z)."""

    s: list[terms.Term]
    t: list[terms.Term]

    def to_dict(self) -> dict:
        return {"s": [str(u) for u in self.s], "t": [str(u) for u in self.t], "roles": dict(ROLES)}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, raw: dict) -> "Witness":
        return cls([terms.parse_term(u) for u in raw["s"]], [terms.parse_term(u) for u in raw["t"]])


def extract_witness_terms(
    a: Algebra, p: PatternPath, cap: int | None = DEFAULT_CAP, allow_large: bool = False, result: OracleResult | None = None
) -> Witness:
    """Read terms for the condition of ``p`` off a walk in K(A).

    t_i is the provenance term of the K member used for edge i.  s_i for
    0 < i < n is read off the next edge: ``t_{i+1}(x,x,y)`` if that edge is
    forward, ``t_{i+1}(x,y,y)`` if it is backward.
    """
    if is_trivial(p):
        _check_input(a, allow_large)
        s, t = trivial_witness(p)
        return Witness(s, t)
    if result is None:
        result = oracle_decide(a, p, cap=cap, allow_large=allow_large)
    if not result.satisfied:
        raise NoWalk("the algebra has no P-shaped walk from x to y in K(A)")
    t = [result.k.sub.term_at(row) for row in result.rows]
    X, Y = terms.Var("x"), terms.Var("y")
    s = [X]
    for i in range(1, p.n):
        middle = X if p.edges[i].forward else Y
        s.append(terms.substitute(t[i], {"v1": X, "v2": middle, "v3": Y}))
    s.append(Y)
    return Witness(s, t)


def verify_witness(a: Algebra, p: PatternPath, witness: Witness) -> tuple[bool, list[tuple[str, int, int]]]:
    """Check every equation of the condition at all ``|A|^2`` values of (x, y)."""
    interpret = {f"t{i}": u for i, u in enumerate(witness.t, start=1)}
    for i, u in enumerate(witness.s):
        interpret[f"s{i}"] = terms.substitute(u, {"x": terms.Var("v1"), "y": terms.Var("v2")})
    xs, ys = (np.array(v) for v in xy_generators(a.size))
    env = {"x": xs, "y": ys}
    violations = []
    for eq in emit_maltsev_condition(p, substitute=False):
        lhs = np.broadcast_to(terms.eval_with(eq.lhs, interpret, a, env), xs.shape)
        rhs = np.broadcast_to(terms.eval_with(eq.rhs, interpret, a, env), xs.shape)
        for j in np.flatnonzero(lhs != rhs):
            violations.append((str(eq), int(xs[j]), int(ys[j])))
    return not violations, violations
