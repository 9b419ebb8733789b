"""Pattern paths, pattern digraphs and the linear conditions they encode.

A pattern path of length ``n`` has vertices ``0..n``; its i-th edge joins
``i-1`` and ``i`` and is forward ``(i-1, i)`` or backward ``(i, i-1)``, solid
or dashed.  Paths are written in a small token language::

    Fs  forward solid      Bs  backward solid
    Fd  forward dashed     Bd  backward dashed

so ``"Bd"`` is the Maltsev path and ``"Fs Bs Fs"`` encodes three Jonsson terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from . import terms
from .errors import BadSize, BadToken, EmptyPath, NotLayered, UnknownName

SOLID = "solid"
DASHED = "dashed"


@dataclass(frozen=True)
class Edge:
    forward: bool
    solid: bool

    @property
    def token(self) -> str:
        return ("F" if self.forward else "B") + ("s" if self.solid else "d")


FS, FD, BS, BD = Edge(True, True), Edge(True, False), Edge(False, True), Edge(False, False)
_TOKENS = {e.token: e for e in (FS, FD, BS, BD)}


@dataclass(frozen=True)
class PatternPath:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not self.edges:
            raise EmptyPath("a pattern path needs at least one edge")

    @property
    def n(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        """Number of solid edges."""
        return sum(e.solid for e in self.edges)

    @property
    def dsl(self) -> str:
        return " ".join(e.token for e in self.edges)

    def __str__(self):
        return self.dsl

    def __add__(self, other: "PatternPath") -> "PatternPath":
        return PatternPath(self.edges + other.edges)

    def digraph(self) -> "PatternDigraph":
        g = PatternDigraph(range(self.n + 1), initial=0, terminal=self.n)
        for i, e in enumerate(self.edges, start=1):
            u, v = (i - 1, i) if e.forward else (i, i - 1)
            g.add_edge(u, v, e.solid)
        return g


def parse_path(dsl: str) -> PatternPath:
    tokens = dsl.split()
    if not tokens:
        raise EmptyPath("empty path")
    edges = []
    for tok in tokens:
        if tok not in _TOKENS:
            raise BadToken(f"unknown edge token {tok!r}; expected one of Fs, Fd, Bs, Bd")
        edges.append(_TOKENS[tok])
    return PatternPath(tuple(edges))


def _fence(n: int) -> list[Edge]:
    return [FS if i % 2 == 0 else BS for i in range(n)]


GALLERY = ("maltsev", "majority", "jonsson", "dir-jonsson", "gumm", "dir-gumm", "hm")
_SIZED = {"jonsson", "dir-jonsson", "gumm", "dir-gumm", "hm"}


def gallery(name: str, n: int | None = None) -> PatternPath:
    """Named classical conditions.

    ``jonsson(n)`` is the solid fence of n edges starting forward,
    ``gumm(n)`` appends a backward dashed edge to it (n+1 Gumm terms), the
    ``dir-`` variants use n forward solid edges instead of the fence, and
    ``hm(n)`` is n backward dashed edges (congruence (n+1)-permutability).
    """
    if name not in GALLERY:
        raise UnknownName(f"unknown condition {name!r}; known: {', '.join(GALLERY)}")
    if name in ("maltsev", "majority"):
        if n not in (None, 1):
            raise BadSize(f"{name} takes no size")
        return PatternPath((BD,) if name == "maltsev" else (FS,))
    if n is None:
        raise BadSize(f"{name} needs a size n >= 1")
    if not isinstance(n, int) or n < 1:
        raise BadSize(f"{name}: n must be a positive integer, got {n!r}")
    edges = {
        "jonsson": _fence(n),
        "dir-jonsson": [FS] * n,
        "gumm": _fence(n) + [BD],
        "dir-gumm": [FS] * n + [BD],
        "hm": [BD] * n,
    }[name]
    return PatternPath(tuple(edges))


def parse_condition(spec: str) -> PatternPath:
    """Parse ``name``, ``name:n`` or ``path:<tokens>``."""
    spec = spec.strip()
    if spec.startswith("path:"):
        return parse_path(spec[5:])
    name, _, num = spec.partition(":")
    if num:
        try:
            size = int(num)
        except ValueError:
            raise BadSize(f"bad size in condition {spec!r}") from None
        return gallery(name, size)
    return gallery(name)


def is_trivial(p: PatternPath) -> bool:
    """A forward dashed edge makes the condition hold in every algebra."""
    return any(e.forward and not e.solid for e in p.edges)


class PatternDigraph:
    """A digraph with solid and dashed edges and distinguished initial/terminal vertices.

    At most one edge is kept per ordered pair: a solid edge absorbs a dashed
    one, since no walk search can tell them apart otherwise.
    """

    def __init__(self, vertices: Iterable[Hashable], initial, terminal, edges=None):
        self.vertices = tuple(vertices)
        vs = set(self.vertices)
        if initial not in vs or terminal not in vs:
            raise ValueError("initial and terminal must be vertices")
        self.initial = initial
        self.terminal = terminal
        self._vset = vs
        self.edges: dict[tuple, bool] = {}
        for (u, v), solid in (edges or {}).items():
            self.add_edge(u, v, solid)

    def add_edge(self, u, v, solid: bool):
        if u not in self._vset or v not in self._vset:
            raise ValueError(f"edge ({u!r}, {v!r}) has an endpoint outside the vertex set")
        self.edges[(u, v)] = self.edges.get((u, v), False) or bool(solid)

    @property
    def solid_edges(self) -> set[tuple]:
        return {e for e, s in self.edges.items() if s}

    @property
    def dashed_edges(self) -> set[tuple]:
        return {e for e, s in self.edges.items() if not s}

    def __eq__(self, other):
        if not isinstance(other, PatternDigraph):
            return NotImplemented
        return (
            set(self.vertices) == set(other.vertices)
            and self.edges == other.edges
            and (self.initial, self.terminal) == (other.initial, other.terminal)
        )

    def __repr__(self):
        return f"PatternDigraph({len(self.vertices)} vertices, {len(self.solid_edges)} solid, {len(self.dashed_edges)} dashed)"

    def to_dot(self, name: str = "G") -> str:
        ids = {v: f"n{k}" for k, v in enumerate(self.vertices)}
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            attrs = [f'label="{v}"']
            if v == self.initial:
                attrs.append('xlabel="s"')
            if v == self.terminal:
                attrs.append('xlabel="t"' if v != self.initial else 'xlabel="s,t"')
            lines.append(f"  {ids[v]} [{', '.join(attrs)}];")
        for (u, v), solid in sorted(self.edges.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1]))):
            lines.append(f"  {ids[u]} -> {ids[v]} [style={SOLID if solid else DASHED}];")
        lines.append("}")
        return "\n".join(lines)


def j_digraph(x="x", y="y") -> PatternDigraph:
    """Two solid loops and one dashed edge x -> y: the generators of K(A)."""
    return PatternDigraph([x, y], x, y, {(x, x): True, (y, y): True, (x, y): False})


def product(g: PatternDigraph, h: PatternDigraph) -> PatternDigraph:
    verts = [(v1, v2) for v1 in g.vertices for v2 in h.vertices]
    out = PatternDigraph(verts, (g.initial, h.initial), (g.terminal, h.terminal))
    for (v1, u1), s1 in g.edges.items():
        for (v2, u2), s2 in h.edges.items():
            out.add_edge((v1, v2), (u1, u2), s1 and s2)
    return out


@dataclass
class LayeredDigraph:
    """A pattern digraph whose vertices are split into layers ``0..n``.

    ``edges[i]`` maps ``(u, v)`` to solidity for the edges between layer
    ``i-1`` and layer ``i`` (``edges[0]`` is unused), stored in their actual
    orientation.
    """

    layers: list[list]
    edges: list[dict] = field(default_factory=list)
    initial: Hashable = None
    terminal: Hashable = None

    @classmethod
    def from_digraph(cls, g: PatternDigraph, layer_of, n: int) -> "LayeredDigraph":
        layers = [[] for _ in range(n + 1)]
        for v in g.vertices:
            layers[layer_of(v)].append(v)
        edges = [dict() for _ in range(n + 1)]
        for (u, v), s in g.edges.items():
            lu, lv = layer_of(u), layer_of(v)
            if abs(lu - lv) != 1:
                raise NotLayered(f"edge ({u!r}, {v!r}) skips layers")
            edges[max(lu, lv)][(u, v)] = s
        return cls(layers, edges, g.initial, g.terminal)


def find_walk(p: PatternPath, g: LayeredDigraph) -> list | None:
    """A P-shaped walk from ``g.initial`` to ``g.terminal``, or ``None``.

    Position i of the walk is forced into layer i, so a forward sweep of
    reachable sets followed by backtracking through recorded parents suffices.
    Solid path edges need solid images; dashed ones accept either style.
    """
    n = p.n
    if len(g.layers) != n + 1:
        raise NotLayered(f"expected {n + 1} layers, got {len(g.layers)}")
    layer_sets = [set(layer) for layer in g.layers]
    if g.initial not in layer_sets[0] or g.terminal not in layer_sets[n]:
        raise NotLayered("initial vertex must sit in layer 0 and terminal in layer n")
    parents: list[dict] = [{g.initial: None}]
    for i, e in enumerate(p.edges, start=1):
        lo, hi = layer_sets[i - 1], layer_sets[i]
        step: dict = {}
        for (u, v), solid in g.edges[i].items():
            src, dst = (u, v) if e.forward else (v, u)
            if src not in lo or dst not in hi:
                raise NotLayered(f"edge ({u!r}, {v!r}) is not oriented like path edge {i}")
            if e.solid and not solid:
                continue
            if src in parents[-1] and dst not in step:
                step[dst] = src
        parents.append(step)
        if not step:
            return None
    if g.terminal not in parents[n]:
        return None
    walk = [g.terminal]
    for i in range(n, 0, -1):
        walk.append(parents[i][walk[-1]])
    return walk[::-1]


def layered_product(g: PatternDigraph, p: PatternPath) -> LayeredDigraph:
    """``g x P`` as a layered digraph (layer i holds ``V(g) x {i}``)."""
    return LayeredDigraph.from_digraph(product(g, p.digraph()), lambda v: v[1], p.n)


# --- equations ------------------------------------------------------------


@dataclass(frozen=True)
class Equation:
    lhs: terms.Term
    rhs: terms.Term

    def __str__(self):
        return f"{self.lhs} ≈ {self.rhs}"

    def key(self) -> frozenset:
        """Orientation-free structural identity."""
        return frozenset((terms.to_text(self.lhs), terms.to_text(self.rhs)))


@dataclass(frozen=True)
class EquationSystem:
    equations: tuple[Equation, ...]

    def __iter__(self):
        return iter(self.equations)

    def __len__(self):
        return len(self.equations)

    def lines(self) -> list[str]:
        return [str(eq) for eq in self.equations]

    def to_text(self) -> str:
        return "\n".join(self.lines())

    def symbols(self) -> dict[str, int]:
        """Function symbols with their arities."""
        out: dict[str, int] = {}

        def go(t):
            if isinstance(t, terms.App):
                out[t.op] = len(t.args)
                for c in t.args:
                    go(c)

        for eq in self.equations:
            go(eq.lhs)
            go(eq.rhs)
        return out

    def keys(self) -> set[frozenset]:
        return {eq.key() for eq in self.equations}


X, Y = terms.Var("x"), terms.Var("y")


def _s(i: int) -> terms.App:
    return terms.App(f"s{i}", (X, Y))


def _t(i: int, a, b, c) -> terms.App:
    return terms.App(f"t{i}", (a, b, c))


def emit_maltsev_condition(p: PatternPath, substitute: bool = True) -> EquationSystem:
    """The linear equations demanding binary s_0..s_n and ternary t_1..t_n along ``p``.

    With ``substitute`` (the default) s_0 and s_n are written as x and y and
    the two defining equations for them are dropped.
    """
    n = p.n

    def s(i):
        if substitute and i == 0:
            return X
        if substitute and i == n:
            return Y
        return _s(i)

    eqs = [] if substitute else [Equation(_s(0), X), Equation(_s(n), Y)]
    for i, e in enumerate(p.edges, start=1):
        xxy, xyy = _t(i, X, X, Y), _t(i, X, Y, Y)
        if e.forward:
            eqs += [Equation(xxy, s(i - 1)), Equation(xyy, s(i))]
        else:
            eqs += [Equation(xxy, s(i)), Equation(xyy, s(i - 1))]
        if e.solid:
            eqs.append(Equation(_t(i, X, Y, X), X))
    return EquationSystem(tuple(eqs))


def eliminate_inner(system: EquationSystem, n: int) -> EquationSystem:
    """Remove s_1..s_{n-1} by equating the two terms each one is tied to.

    The result is the compact form in which these conditions are usually
    stated, e.g. ``t1(x,y,y) = t2(x,y,y)`` for Jonsson terms.
    """
    eqs = list(system.equations)
    for i in range(1, n):
        name = f"s{i}"
        tied = [eq for eq in eqs if isinstance(eq.rhs, terms.App) and eq.rhs.op == name]
        if len(tied) != 2:
            raise ValueError(f"{name} occurs in {len(tied)} equations, expected 2")
        eqs = [eq for eq in eqs if eq not in tied]
        eqs.append(Equation(tied[0].lhs, tied[1].lhs))
    return EquationSystem(tuple(eqs))


def collapses_to_projection(system: EquationSystem) -> bool:
    """Check that setting x = y forces every symbol to act as the identity.

    Each equation, read with x = y, identifies ``sym(x,...,x)`` with another
    such value or with x; the condition is idempotent iff every symbol ends up
    in the class of x.
    """
    parent: dict[str, str] = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            a = parent[a]
        return a

    def node(t):
        return "x" if isinstance(t, terms.Var) else t.op

    for eq in system:
        parent[find(node(eq.lhs))] = find(node(eq.rhs))
    return all(find(sym) == find("x") for sym in system.symbols())


def is_linear(system: EquationSystem) -> bool:
    def ok(t):
        return isinstance(t, terms.Var) or all(isinstance(c, terms.Var) for c in t.args)

    return all(ok(eq.lhs) and ok(eq.rhs) for eq in system)


def parse_equations(text: str) -> EquationSystem:
    eqs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        lhs, sep, rhs = line.partition("≈")
        if not sep:
            raise ValueError(f"missing ≈ in {line!r}")
        eqs.append(Equation(terms.parse_term(lhs), terms.parse_term(rhs)))
    return EquationSystem(tuple(eqs))


def trivial_witness(p: PatternPath) -> tuple[list[terms.Term], list[terms.Term]]:
    """Projection terms satisfying the condition of a path with a forward dashed edge.

    With the first such edge at position i: t_j = x before it, t_i = y, and
    t_j = z after it; s_j is x up to i-1 and y from i on.
    """
    i = next(j for j, e in enumerate(p.edges, start=1) if e.forward and not e.solid)
    t = [terms.var(1) if j < i else terms.var(2) if j == i else terms.var(3) for j in range(1, p.n + 1)]
    s = [X if j < i else Y for j in range(p.n + 1)]
    return s, t


def path_variants(n_max: int) -> Sequence[tuple[str, PatternPath]]:
    """Every gallery condition up to size ``n_max``, labelled like CLI specs."""
    out = [("maltsev", gallery("maltsev")), ("majority", gallery("majority"))]
    for name in ("jonsson", "dir-jonsson", "gumm", "dir-gumm", "hm"):
        out += [(f"{name}:{n}", gallery(name, n)) for n in range(1, n_max + 1)]
    return out
