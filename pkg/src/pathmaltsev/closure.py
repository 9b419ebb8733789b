"""Subuniverse generation in finite powers ``A^m``.

:func:`generate` computes ``Sg(gens)`` by a semi-naive worklist closure: in a
round, an operation is applied only to argument combinations that contain at
least one element found in the previous round.  Argument combinations are
enumerated in numpy chunks.  Every element remembers one derivation (the first
one found), which :meth:`Subpower.term_of` replays into a term.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from . import terms
from .algebra import Algebra, decode, encode
from .errors import CapExceeded

DEFAULT_CAP = 1 << 22
BITSET_LIMIT = 1 << 24
CHUNK = 1 << 18


class Subpower:
    """A subuniverse of ``A^m`` together with a derivation for every element.

    ``codes[k]`` is the tuple code of element ``k`` and ``coords[k]`` its
    coordinates.  Elements ``0..len(generators)-1`` are the (distinct)
    generators; element ``k`` beyond them was obtained as
    ``op[prov_op[k]](prov_args[k, :arity])``.
    """

    def __init__(self, algebra: Algebra, m: int):
        self.algebra = algebra
        self.m = m
        self.generators: tuple[int, ...] = ()
        self.gen_slot: np.ndarray = np.zeros(0, dtype=np.int64)
        self.complete = False
        self._coords = np.zeros((0, m), dtype=np.int64)
        self._codes = np.zeros(0, dtype=np.int64)
        self._prov_op = np.zeros(0, dtype=np.int64)
        self._prov_args = np.zeros((0, max(algebra.arities)), dtype=np.int64)
        self._n = 0
        self._index: dict[int, int] | None = None

    # --- storage ------------------------------------------------------------

    def _append(self, coords, codes, ops, args):
        k = len(codes)
        if self._n + k > len(self._codes):
            cap = max(2 * len(self._codes), self._n + k, 64)
            self._coords = _grow(self._coords, cap)
            self._codes = _grow(self._codes, cap)
            self._prov_op = _grow(self._prov_op, cap)
            self._prov_args = _grow(self._prov_args, cap)
        sl = slice(self._n, self._n + k)
        self._coords[sl] = coords
        self._codes[sl] = codes
        self._prov_op[sl] = ops
        self._prov_args[sl, : args.shape[1]] = args
        self._n += k
        self._index = None

    @property
    def coords(self) -> np.ndarray:
        return self._coords[: self._n]

    @property
    def codes(self) -> np.ndarray:
        return self._codes[: self._n]

    def __len__(self):
        return self._n

    def index(self, element) -> int:
        """Position of an element given as a code or an m-tuple."""
        code = element if isinstance(element, (int, np.integer)) else encode(element, self.algebra.size)
        if self._index is None:
            self._index = {int(c): k for k, c in enumerate(self.codes)}
        return self._index[int(code)]

    def __contains__(self, element) -> bool:
        try:
            self.index(element)
        except KeyError:
            return False
        return True

    def tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.coords]

    def code_set(self) -> set[int]:
        return {int(c) for c in self.codes}

    # --- provenance ---------------------------------------------------------

    def term_of(self, element, names: Sequence[str] | None = None) -> terms.Term:
        """A term over ``v1..vg`` (one variable per generator) evaluating to ``element``.

        Evaluating the term coordinatewise with ``v_j`` set to the j-th
        generator gives back ``element``.  Pass ``names`` to use other
        variable names.
        """
        return self.term_at(self.index(element), names)

    def term_at(self, root: int, names: Sequence[str] | None = None) -> terms.Term:
        """Like :meth:`term_of`, for the element stored at position ``root``."""
        if names is None:
            names = [f"v{j + 1}" for j in range(len(self.generators))]
        leaves = [terms.Var(n) for n in names]
        ops = self.algebra.operations
        memo: dict[int, terms.Term] = {}
        # iterative post-order; provenance chains can be long
        stack = [root]
        while stack:
            k = stack[-1]
            if k in memo:
                stack.pop()
                continue
            if self._prov_op[k] < 0:
                memo[k] = leaves[self.gen_slot[k]]
                stack.pop()
                continue
            op = ops[self._prov_op[k]]
            kids = [int(c) for c in self._prov_args[k, : op.arity]]
            missing = [c for c in kids if c not in memo]
            if missing:
                stack.extend(missing)
                continue
            memo[k] = terms.App(op.name, tuple(memo[c] for c in kids))
            stack.pop()
        return memo[root]


def _grow(arr: np.ndarray, cap: int) -> np.ndarray:
    out = np.zeros((cap,) + arr.shape[1:], dtype=arr.dtype)
    out[: len(arr)] = arr
    return out


class _Membership:
    def __init__(self, space: int):
        self.bits = np.zeros(space, dtype=bool) if space <= BITSET_LIMIT else None
        self.sorted = np.zeros(0, dtype=np.int64)

    def fresh(self, codes: np.ndarray) -> np.ndarray:
        if self.bits is not None:
            return ~self.bits[codes]
        if not len(self.sorted):
            return np.ones(len(codes), dtype=bool)
        pos = np.searchsorted(self.sorted, codes)
        pos[pos == len(self.sorted)] = 0
        return self.sorted[pos] != codes

    def add(self, codes: np.ndarray):
        if self.bits is not None:
            self.bits[codes] = True
        else:
            self.sorted = np.union1d(self.sorted, codes)


def _powers(size: int, m: int) -> np.ndarray:
    return np.array([size ** (m - 1 - j) for j in range(m)], dtype=np.int64)


def generate(
    a: Algebra,
    m: int,
    gens: Iterable,
    cap: int | None = DEFAULT_CAP,
    stop: Callable[[Subpower], bool] | None = None,
) -> Subpower:
    """Return ``Sg^{A^m}(gens)`` with a derivation for every element.

    ``gens`` are m-tuples (or tuple codes).  Raises :class:`CapExceeded` once
    more than ``cap`` elements are found.  If ``stop`` is given it is called
    whenever the closure has grown noticeably and after every operation
    pass; a true result ends the closure early and the
    returned subpower has ``complete == False``.
    """
    size = a.size
    if size ** m >= 2**63:
        raise CapExceeded(f"A^{m} is too large to index with 64-bit codes")
    gen_codes = []
    for g in gens:
        gen_codes.append(int(g) if isinstance(g, (int, np.integer)) else encode(g, size))
    if not gen_codes:
        raise ValueError("need at least one generator")
    for c in gen_codes:
        if not 0 <= c < size**m:
            raise ValueError(f"generator code {c} out of range for A^{m}")

    sub = Subpower(a, m)
    sub.generators = tuple(gen_codes)
    member = _Membership(size**m)
    distinct = list(dict.fromkeys(gen_codes))
    codes0 = np.array(distinct, dtype=np.int64)
    coords0 = np.array([decode(c, size, m) for c in distinct], dtype=np.int64).reshape(-1, m)
    sub._append(coords0, codes0, np.full(len(distinct), -1), np.zeros((len(distinct), 1), dtype=np.int64))
    sub.gen_slot = np.array([gen_codes.index(c) for c in distinct], dtype=np.int64)
    member.add(codes0)
    if cap is not None and len(sub) > cap:
        raise CapExceeded(f"closure exceeded cap of {cap} elements")

    pw = _powers(size, m)
    checked = 0
    lo = 0
    while lo < len(sub):
        hi = len(sub)
        for op_index, op in enumerate(a.operations):
            for j in range(op.arity):
                # position j holds a frontier element; earlier ones are older,
                # later ones range over everything known at round start
                dims = [lo] * j + [hi - lo] + [hi] * (op.arity - 1 - j)
                offs = [0] * j + [lo] + [0] * (op.arity - 1 - j)
                total = int(np.prod(dims, dtype=object))
                for start in range(0, total, CHUNK):
                    _apply_chunk(sub, member, op_index, op, dims, offs, start, min(total, start + CHUNK), pw, cap)
                    # geometric throttle keeps the total cost of checks linear
                    if stop is not None and len(sub) >= 1.25 * checked + 16:
                        checked = len(sub)
                        if stop(sub):
                            return sub
            if stop is not None and len(sub) > checked:
                checked = len(sub)
                if stop(sub):
                    return sub
        lo = hi
    sub.complete = True
    return sub


def _apply_chunk(sub, member, op_index, op, dims, offs, start, end, pw, cap):
    size = sub.algebra.size
    flat = np.arange(start, end, dtype=np.int64)
    idx = [None] * op.arity
    for p in range(op.arity - 1, -1, -1):
        flat, rem = np.divmod(flat, dims[p])
        idx[p] = rem + offs[p]
    coords = sub._coords
    tix = coords[idx[0]]
    for p in range(1, op.arity):
        tix = tix * size + coords[idx[p]]
    res = op.table[tix]
    codes = res @ pw
    fresh = member.fresh(codes)
    if not fresh.any():
        return
    sel = np.flatnonzero(fresh)
    uniq, first = np.unique(codes[sel], return_index=True)
    order = np.sort(first)
    keep = sel[order]
    if cap is not None and len(sub) + len(keep) > cap:
        raise CapExceeded(f"closure exceeded cap of {cap} elements")
    args = np.stack([ix[keep] for ix in idx], axis=1)
    sub._append(res[keep], codes[keep], np.full(len(keep), op_index), args)
    member.add(codes[keep])


def naive_closure(a: Algebra, m: int, gens: Iterable[Sequence[int]]) -> set[tuple[int, ...]]:
    """Reference fixed point: reapply every operation to every argument tuple until stable."""
    from itertools import product

    current = {tuple(g) for g in gens}
    while True:
        nxt = set(current)
        for op in range(len(a.operations)):
            arity = a.operations[op].arity
            for args in product(sorted(current), repeat=arity):
                nxt.add(tuple(a.apply(op, [col[j] for col in args]) for j in range(m)))
        if nxt == current:
            return current
        current = nxt


def eval_on_generators(t: terms.Term, sub: Subpower) -> tuple[int, ...]:
    """Evaluate a provenance term coordinatewise on the generators of ``sub``."""
    gens = [np.array(decode(c, sub.algebra.size, sub.m)) for c in sub.generators]
    assignment = {f"v{j + 1}": g for j, g in enumerate(gens)}
    val = terms.eval_term(t, sub.algebra, assignment)
    return tuple(int(x) for x in np.broadcast_to(val, (sub.m,)))
