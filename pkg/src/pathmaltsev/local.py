"""The polynomial-time local test for path conditions.

For a path ``P`` of length ``n`` with ``k`` solid edges, an idempotent algebra
satisfies the condition of ``P`` exactly when every testing digraph with all
arities equal to one has a P-shaped walk from ``a_0`` to ``b_n``.  There are
``|A|**(2n + 2k + 2)`` such digraphs: one element choice for each of
``a_0..a_n, b_0..b_n`` and a label pair ``(c_i, d_i)`` for each solid edge.

:func:`build_testing_digraph` builds one testing digraph of any arities
literally.  :func:`decide` scans the all-ones instances without building
digraphs: every edge relation ``E_i`` depends on at most six elements, so its
closure is memoized and turned into a one-step transition on bitmasks of layer
vertices, and the whole scan becomes a vectorized sweep over instance codes.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .algebra import Algebra, is_idempotent
from .closure import DEFAULT_CAP, Subpower, generate
from .errors import NotIdempotent
from .pattern import LayeredDigraph, PatternPath, find_walk, is_trivial

SCAN_CHUNK = 1 << 20


@dataclass(frozen=True)
class TestingInstance:
    """Generators of one testing digraph.

    ``a[i]``, ``b[i]`` are tuples of length ``m[i]``; ``c[i-1]``, ``d[i-1]``
    label edge i and are ``None`` on dashed edges, where labels have no
    effect.
    """

    __test__ = False

    path: PatternPath
    a: tuple[tuple[int, ...], ...]
    b: tuple[tuple[int, ...], ...]
    c: tuple[tuple[int, ...] | None, ...]
    d: tuple[tuple[int, ...] | None, ...]

    def __post_init__(self):
        n = self.path.n
        if not (len(self.a) == len(self.b) == n + 1 and len(self.c) == len(self.d) == n):
            raise ValueError("instance does not match path length")
        for x, y in zip(self.a, self.b):
            if len(x) != len(y) or not x:
                raise ValueError("a_i and b_i must be non-empty tuples of equal arity")
        for e, x, y in zip(self.path.edges, self.c, self.d):
            if e.solid and (x is None or y is None or len(x) != len(y) or not x):
                raise ValueError("solid edges need labels c_i, d_i of equal positive arity")

    @property
    def m(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.a)

    @property
    def p(self) -> tuple[int | None, ...]:
        return tuple(None if x is None else len(x) for x in self.c)

    @classmethod
    def ones(cls, path: PatternPath, a, b, c, d) -> "TestingInstance":
        """All-ones instance from plain elements; labels on dashed edges are dropped."""
        cc = tuple((x,) if e.solid else None for e, x in zip(path.edges, c))
        dd = tuple((x,) if e.solid else None for e, x in zip(path.edges, d))
        return cls(path, tuple((x,) for x in a), tuple((x,) for x in b), cc, dd)

    def to_dict(self) -> dict:
        as_list = lambda xs: [None if x is None else list(x) for x in xs]  # noqa: E731
        return {
            "path": self.path.dsl,
            "m": list(self.m),
            "p": list(self.p),
            "a": as_list(self.a),
            "b": as_list(self.b),
            "c": as_list(self.c),
            "d": as_list(self.d),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TestingInstance":
        from .pattern import parse_path

        tup = lambda xs: tuple(None if x is None else tuple(x) for x in xs)  # noqa: E731
        return cls(parse_path(raw["path"]), tup(raw["a"]), tup(raw["b"]), tup(raw["c"]), tup(raw["d"]))


@dataclass
class TestingDigraph:
    __test__ = False

    instance: TestingInstance
    potatoes: list[Subpower]
    relations: list[Subpower]
    digraph: LayeredDigraph

    def edges(self, i: int) -> dict[tuple, bool]:
        """Edges between potatoes i-1 and i as ``(u, v) -> solid``, with u, v tuples."""
        return {(u[1], v[1]): s for (u, v), s in self.digraph.edges[i].items()}

    def walk(self) -> list | None:
        w = find_walk(self.instance.path, self.digraph)
        return None if w is None else [v[1] for v in w]


def edge_generators(forward: bool, c, d, a_prev, b_prev, a_cur, b_cur) -> list[tuple]:
    """The three generators of ``E_i``; ``c``/``d`` are ``()`` for dashed edges."""
    if forward:
        return [c + a_prev + a_cur, d + a_prev + b_cur, c + b_prev + b_cur]
    return [c + a_cur + a_prev, d + a_cur + b_prev, c + b_cur + b_prev]


def build_testing_digraph(a: Algebra, inst: TestingInstance, cap: int | None = DEFAULT_CAP) -> TestingDigraph:
    """Generate the potatoes ``B_i`` and edge relations ``E_i`` of one instance.

    Vertices of the layered digraph are ``(i, tuple)``.  An element
    ``(e, f, g)`` of ``E_i`` becomes an edge f -> g, solid iff the path edge is
    solid and ``e == c_i``.  Dashed path edges generate ``E_i`` without the
    label block.
    """
    path = inst.path
    potatoes = [generate(a, len(x), [x, y], cap=cap) for x, y in zip(inst.a, inst.b)]
    layers = [[(i, t) for t in B.tuples()] for i, B in enumerate(potatoes)]
    edge_maps: list[dict] = [dict()]
    relations = []
    for i, e in enumerate(path.edges, start=1):
        c = inst.c[i - 1] if e.solid else ()
        d = inst.d[i - 1] if e.solid else ()
        gens = edge_generators(e.forward, c, d, inst.a[i - 1], inst.b[i - 1], inst.a[i], inst.b[i])
        E = generate(a, len(gens[0]), gens, cap=cap)
        relations.append(E)
        p = len(c)
        m_from = len(inst.a[i - 1] if e.forward else inst.a[i])
        src_layer, dst_layer = (i - 1, i) if e.forward else (i, i - 1)
        edges: dict = {}
        for row in E.tuples():
            label, f, g = row[:p], row[p : p + m_from], row[p + m_from :]
            solid = e.solid and label == c
            key = ((src_layer, f), (dst_layer, g))
            edges[key] = edges.get(key, False) or solid
        edge_maps.append(edges)
    g = LayeredDigraph(layers, edge_maps, (0, inst.a[0]), (path.n, inst.b[path.n]))
    return TestingDigraph(inst, potatoes, relations, g)


def check_instance(a: Algebra, p: PatternPath, inst: TestingInstance, cap: int | None = DEFAULT_CAP):
    """Rebuild one testing digraph from scratch and return a P-shaped walk or ``None``.

    Independent of the memoized scan in :func:`decide`; use it to confirm a
    refutation certificate.
    """
    if inst.path != p:
        raise ValueError("instance was built for a different path")
    _require_idempotent(a)
    return build_testing_digraph(a, inst, cap).walk()


# --- the all-ones scan ----------------------------------------------------


@dataclass
class DecisionReport:
    condition: str
    verdict: str
    counterexample: TestingInstance | None = None
    stats: dict = field(default_factory=dict)

    @property
    def satisfied(self) -> bool:
        return self.verdict != "refuted"

    def to_dict(self, timing: bool = True) -> dict:
        stats = dict(self.stats)
        if not timing:
            stats.pop("wall_time", None)
        return {
            "condition": self.condition,
            "verdict": self.verdict,
            "counterexample": None if self.counterexample is None else self.counterexample.to_dict(),
            "stats": stats,
        }

    def to_json(self, timing: bool = True, **kwargs) -> str:
        return json.dumps(self.to_dict(timing), **kwargs)


class _Transitions:
    """Memo of edge closures as one-step moves between adjacent layers."""

    def __init__(self, a: Algebra, cap):
        self.a = a
        self.cap = cap
        self.closures: dict[tuple, list[tuple]] = {}
        self.ids: dict[tuple, int] = {}
        self.succ: list[list[int]] = []
        self.lookups = 0

    def closure(self, gens: list[tuple]) -> list[tuple]:
        key = tuple(sorted(set(gens)))
        self.lookups += 1
        if key not in self.closures:
            self.closures[key] = generate(self.a, len(key[0]), key, cap=self.cap).tuples()
        return self.closures[key]

    def get(self, forward: bool, solid: bool, ap, bp, ac, bc, c=None, d=None) -> int:
        key = (forward, solid, ap, bp, ac, bc, c, d)
        tid = self.ids.get(key)
        if tid is not None:
            return tid
        lab = (c,) if solid else ()
        dl = (d,) if solid else ()
        rel = self.closure(edge_generators(forward, lab, dl, (ap,), (bp,), (ac,), (bc,)))
        succ = [0] * self.a.size
        for row in rel:
            if solid and row[0] != c:
                continue
            f, g = row[-2], row[-1]
            # walk goes from layer i-1 to layer i; backward edges point the other way
            u, v = (f, g) if forward else (g, f)
            succ[u] |= 1 << v
        tid = self.ids[key] = len(self.succ)
        self.succ.append(succ)
        return tid


@dataclass
class _ScanPlan:
    size: int
    n: int
    solid_positions: list[int]
    tables: list[np.ndarray]  # per edge: transition id indexed by its element digits
    succ: np.ndarray  # (n_transitions, size) bitmasks

    @property
    def digits(self) -> int:
        return 2 * (self.n + 1) + 2 * len(self.solid_positions)

    @property
    def total(self) -> int:
        return self.size**self.digits


def _build_plan(a: Algebra, p: PatternPath, cap) -> tuple[_ScanPlan, _Transitions]:
    N = a.size
    trans = _Transitions(a, cap)
    tables = []
    for e in p.edges:
        if e.solid:
            tab = np.empty((N,) * 6, dtype=np.int64)
            for ap, bp, ac, bc, c, d in product(range(N), repeat=6):
                tab[ap, bp, ac, bc, c, d] = trans.get(e.forward, True, ap, bp, ac, bc, c, d)
        else:
            tab = np.empty((N,) * 4, dtype=np.int64)
            for ap, bp, ac, bc in product(range(N), repeat=4):
                tab[ap, bp, ac, bc] = trans.get(e.forward, False, ap, bp, ac, bc)
        tables.append(tab)
    solid_positions = [i for i, e in enumerate(p.edges) if e.solid]
    succ = np.array(trans.succ, dtype=np.int64).reshape(-1, N)
    return _ScanPlan(N, p.n, solid_positions, tables, succ), trans


def _scan(plan: _ScanPlan, start: int, end: int, stop_at_failure: bool = True):
    """Scan instance codes ``[start, end)``.

    Returns ``(first failing code or None, failures, instances scanned)``.
    """
    N, n = plan.size, plan.n
    first = None
    failures = 0
    scanned = 0
    for lo in range(start, end, SCAN_CHUNK):
        hi = min(end, lo + SCAN_CHUNK)
        scanned += hi - lo
        digits = _digits(np.arange(lo, hi, dtype=np.int64), N, plan.digits)
        a_d, b_d = digits[: n + 1], digits[n + 1 : 2 * n + 2]
        k = len(plan.solid_positions)
        c_d = dict(zip(plan.solid_positions, digits[2 * n + 2 : 2 * n + 2 + k]))
        d_d = dict(zip(plan.solid_positions, digits[2 * n + 2 + k :]))
        mask = np.left_shift(np.int64(1), a_d[0])
        for i in range(n):
            idx = (a_d[i], b_d[i], a_d[i + 1], b_d[i + 1])
            if i in c_d:
                idx += (c_d[i], d_d[i])
            tid = plan.tables[i][idx]
            rows = plan.succ[tid]
            nxt = np.zeros_like(mask)
            for u in range(N):
                nxt |= np.where((mask >> u) & 1 == 1, rows[:, u], 0)
            mask = nxt
        bad = ((mask >> b_d[n]) & 1) == 0
        if bad.any():
            hits = np.flatnonzero(bad)
            if first is None:
                first = lo + int(hits[0])
            failures += len(hits)
            if stop_at_failure:
                return first, failures, scanned
    return first, failures, scanned


def _digits(codes: np.ndarray, base: int, count: int) -> list[np.ndarray]:
    out = [None] * count
    for j in range(count - 1, -1, -1):
        codes, out[j] = np.divmod(codes, base)
    return out


def _instance_from_code(p: PatternPath, size: int, code: int) -> TestingInstance:
    n = p.n
    solid = [i for i, e in enumerate(p.edges) if e.solid]
    k = len(solid)
    digits = [int(x[0]) for x in _digits(np.array([code], dtype=np.int64), size, 2 * n + 2 + 2 * k)]
    a, b = digits[: n + 1], digits[n + 1 : 2 * n + 2]
    c = [0] * n
    d = [0] * n
    for j, i in enumerate(solid):
        c[i] = digits[2 * n + 2 + j]
        d[i] = digits[2 * n + 2 + k + j]
    return TestingInstance.ones(p, a, b, c, d)


def instance_code(inst: TestingInstance, size: int) -> int:
    """Position of an all-ones instance in the lexicographic scan order."""
    digits = [x[0] for x in inst.a] + [x[0] for x in inst.b]
    digits += [x[0] for x in inst.c if x is not None] + [x[0] for x in inst.d if x is not None]
    code = 0
    for x in digits:
        code = code * size + x
    return code


def instance_count(size: int, p: PatternPath) -> int:
    """Number of all-ones instances, ``|A|**(2n + 2k + 2)``."""
    return size ** (2 * p.n + 2 * p.k + 2)


def _require_idempotent(a: Algebra):
    ok, violations = is_idempotent(a)
    if not ok:
        raise NotIdempotent(violations)


def _scan_worker(args):
    plan, start, end, stop = args
    return start, _scan(plan, start, end, stop)


def decide(
    a: Algebra,
    p: PatternPath,
    *,
    canonical: bool = True,
    workers: int = 1,
    exhaustive: bool = False,
    cap: int | None = DEFAULT_CAP,
    condition: str | None = None,
) -> DecisionReport:
    """Decide the condition of ``p`` for the idempotent algebra ``a``.

    Paths with a forward dashed edge are reported ``trivially-satisfied``
    without a scan.  Otherwise the all-ones instances are scanned in
    lexicographic order of ``(a_0..a_n, b_0..b_n, c's, d's)`` (labels of
    solid edges only).  In canonical mode the counterexample is the first
    failing instance in that order, whatever ``workers`` is.
    ``exhaustive`` scans everything even after a failure, which is what the
    benchmarks use for instance accounting.
    """
    t0 = time.perf_counter()
    cond = condition or f"path:{p.dsl}"
    _require_idempotent(a)
    total = instance_count(a.size, p)
    if is_trivial(p):
        return DecisionReport(cond, "trivially-satisfied", None, {
            "instances_total": total, "instances_checked": 0, "closures": 0, "cache_hits": 0,
            "wall_time": time.perf_counter() - t0,
        })

    plan, trans = _build_plan(a, p, cap)
    stop = not exhaustive
    if workers <= 1:
        first, failures, scanned = _scan(plan, 0, plan.total, stop)
    else:
        bounds = np.linspace(0, plan.total, workers * 4 + 1).astype(np.int64)
        jobs = [(plan, int(s), int(e), stop) for s, e in zip(bounds[:-1], bounds[1:]) if e > s]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_worker, jobs))
        hits = [r[1][0] for r in results if r[1][0] is not None]
        first = min(hits) if hits and canonical else (hits[0] if hits else None)
        failures = sum(r[1][1] for r in results)
        scanned = sum(r[1][2] for r in results)

    if exhaustive:
        checked = scanned
    else:
        checked = plan.total if first is None else first + 1
    stats = {
        "instances_total": total,
        "instances_checked": checked,
        "closures": len(trans.closures),
        "cache_hits": trans.lookups - len(trans.closures),
    }
    if exhaustive:
        stats["failing_instances"] = failures
    stats["wall_time"] = time.perf_counter() - t0
    if first is None:
        return DecisionReport(cond, "satisfied", None, stats)
    return DecisionReport(cond, "refuted", _instance_from_code(p, a.size, first), stats)


def all_ones_instances(p: PatternPath, size: int) -> Sequence[TestingInstance]:
    """Every all-ones instance in scan order (small cases only)."""
    return [_instance_from_code(p, size, code) for code in range(instance_count(size, p))]
