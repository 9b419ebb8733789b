"""Term DAGs over an operation signature.

Terms print in prefix form, ``m(v1,v1,v2)``: a name followed by a
parenthesised, comma separated argument list.  Variables are bare names;
closure provenance uses ``v1, v2, ...`` (1-based, one per generator).
Shared subterms are shared Python objects, so a term is a DAG even though it
prints as a tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import UnboundVariable


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=False, repr=False)
class Var(Term):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=False, repr=False)
class App(Term):
    op: str
    args: tuple[Term, ...]

    def __repr__(self):
        return f"App({self.op!r}, {len(self.args)} args)"


def var(k: int) -> Var:
    return Var(f"v{k}")


def to_text(t: Term) -> str:
    memo: dict[int, str] = {}

    def go(u: Term) -> str:
        key = id(u)
        if key not in memo:
            if isinstance(u, Var):
                memo[key] = u.name
            else:
                memo[key] = f"{u.op}({','.join(go(c) for c in u.args)})"
        return memo[key]

    return go(t)


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|[(),])")


def parse_term(text: str) -> Term:
    """Inverse of :func:`to_text`; identical subterms are not re-shared."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad term syntax at {pos}: {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    i = 0

    def go() -> Term:
        nonlocal i
        name = tokens[i]
        i += 1
        if i < len(tokens) and tokens[i] == "(":
            i += 1
            args = [go()]
            while tokens[i] == ",":
                i += 1
                args.append(go())
            if tokens[i] != ")":
                raise ValueError(f"expected ')' in {text!r}")
            i += 1
            return App(name, tuple(args))
        return Var(name)

    term = go()
    if i != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return term


def structurally_equal(s: Term, t: Term) -> bool:
    return to_text(s) == to_text(t)


def variables(t: Term) -> list[str]:
    seen: dict[str, None] = {}
    visited: set[int] = set()

    def go(u):
        if id(u) in visited:
            return
        visited.add(id(u))
        if isinstance(u, Var):
            seen.setdefault(u.name)
        else:
            for c in u.args:
                go(c)

    go(t)
    return list(seen)


def depth(t: Term) -> int:
    memo: dict[int, int] = {}

    def go(u):
        if id(u) not in memo:
            memo[id(u)] = 0 if isinstance(u, Var) else 1 + max(go(c) for c in u.args)
        return memo[id(u)]

    return go(t)


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Replace variables by terms; unmapped variables are kept."""
    memo: dict[int, Term] = {}

    def go(u):
        if id(u) not in memo:
            if isinstance(u, Var):
                memo[id(u)] = mapping.get(u.name, u)
            else:
                memo[id(u)] = App(u.op, tuple(go(c) for c in u.args))
        return memo[id(u)]

    return go(t)


def eval_term(t: Term, a, assignment: Mapping[str, object]):
    """Evaluate ``t`` in algebra ``a``.

    Assignment values may be ints or equal-length integer arrays; arrays are
    evaluated coordinatewise and an array is returned.
    """
    tables = {op.name: op for op in a.operations}
    memo: dict[int, object] = {}

    def go(u):
        key = id(u)
        if key in memo:
            return memo[key]
        if isinstance(u, Var):
            if u.name not in assignment:
                raise UnboundVariable(u.name)
            val = assignment[u.name]
        else:
            op = tables[u.op]
            idx = 0
            for c in u.args:
                idx = idx * a.size + np.asarray(go(c), dtype=np.int64)
            val = op.table[idx]
            val = int(val) if np.ndim(val) == 0 else val
        memo[key] = val
        return val

    return go(t)


def eval_with(t: Term, interpret: Mapping[str, "Term"], a, assignment: Mapping[str, object]):
    """Evaluate a term whose function symbols are themselves defined by terms.

    ``interpret[name]`` is a term in variables ``v1..vr`` giving the meaning
    of the r-ary symbol ``name``.  Used to check equations like
    ``t1(x,y,x) = x`` against witness terms.
    """
    memo: dict[int, object] = {}

    def go(u):
        if id(u) in memo:
            return memo[id(u)]
        if isinstance(u, Var):
            if u.name not in assignment:
                raise UnboundVariable(u.name)
            val = assignment[u.name]
        else:
            inner = {f"v{k + 1}": go(c) for k, c in enumerate(u.args)}
            val = eval_term(interpret[u.op], a, inner)
        memo[id(u)] = val
        return val

    return go(t)


def projection(k: int) -> Var:
    """The k-th projection, as a term in v1, v2, ..."""
    return var(k)


def rename(t: Term, names: Sequence[str]) -> Term:
    """Rename v1, v2, ... to the given names."""
    return substitute(t, {f"v{k + 1}": Var(n) for k, n in enumerate(names)})
