"""Finite algebras given by operation tables.

Elements of an algebra of size ``n`` are the integers ``0..n-1``.  An
operation of arity ``r`` is stored as a flat table of length ``n**r`` in
lexicographic order with the first argument most significant, so that
``f(x1, ..., xr)`` lives at index ``x1*n**(r-1) + ... + xr``.  The same order
is used for tuple codes (:func:`encode` / :func:`decode`) and by the JSON
file format.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    ElementOutOfRange,
    EmptySignature,
    IdempotenceError,
    MalformedTable,
    NoPositiveArityOperation,
)


@dataclass(frozen=True, eq=False)
class OperationTable:
    name: str
    arity: int
    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=np.int64).reshape(-1)
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def __eq__(self, other):
        if not isinstance(other, OperationTable):
            return NotImplemented
        return (
            self.name == other.name
            and self.arity == other.arity
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.name, self.arity, self.table.tobytes()))


@dataclass(frozen=True)
class SizeMeasure:
    """The input-size measure ``sum_i k_i * |A|**i``."""

    value: int
    max_arity: int
    counts_by_arity: dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class Algebra:
    """A validated finite algebra; build one with :func:`validate` or :meth:`from_tables`."""

    size: int
    operations: tuple[OperationTable, ...]
    name: str | None = None

    @classmethod
    def from_tables(cls, size: int, tables, name: str | None = None) -> "Algebra":
        """Build and validate from ``(name, arity, flat_table)`` triples or a name→table mapping.

        When a mapping is given, arities are inferred from table lengths.
        """
        if isinstance(tables, dict):
            ops = []
            for op_name, table in tables.items():
                flat = np.asarray(table).reshape(-1)
                ops.append({"name": op_name, "arity": _infer_arity(size, len(flat)), "table": flat.tolist()})
        else:
            ops = [
                {"name": n, "arity": r, "table": np.asarray(t).reshape(-1).tolist()}
                for n, r, t in tables
            ]
        return validate({"size": size, "name": name, "operations": ops})

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(op.arity for op in self.operations)

    def op_index(self, name: str) -> int:
        for i, op in enumerate(self.operations):
            if op.name == name:
                return i
        raise KeyError(name)

    def apply(self, op, args: Sequence[int]) -> int:
        """Evaluate one basic operation (given by index or name) at ``args``."""
        opt = self.operations[op if isinstance(op, int) else self.op_index(op)]
        if len(args) != opt.arity:
            raise ArityMismatch(f"{opt.name} has arity {opt.arity}, got {len(args)} arguments")
        idx = 0
        for x in args:
            if not 0 <= x < self.size:
                raise ElementOutOfRange(f"element {x} not in [0, {self.size})")
            idx = idx * self.size + x
        return int(opt.table[idx])

    def to_dict(self) -> dict:
        out: dict = {"size": self.size}
        if self.name is not None:
            out["name"] = self.name
        out["operations"] = [
            {"name": op.name, "arity": op.arity, "table": op.table.tolist()}
            for op in self.operations
        ]
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.size == other.size and self.operations == other.operations

    def __hash__(self):
        return hash((self.size, self.operations))

    def __repr__(self):
        sig = ", ".join(f"{op.name}/{op.arity}" for op in self.operations)
        label = f"{self.name!r}, " if self.name else ""
        return f"Algebra({label}size={self.size}, [{sig}])"


def _infer_arity(size: int, length: int) -> int:
    if size == 1:
        raise MalformedTable("arity is ambiguous for a one-element algebra; pass (name, arity, table) triples")
    arity, n = 0, 1
    while n < length:
        n *= size
        arity += 1
    if n != length:
        raise MalformedTable(f"table length {length} is not a power of {size}")
    return arity


def validate(raw: dict) -> Algebra:
    """Check a parsed algebra description and return an :class:`Algebra`.

    ``raw`` follows the JSON file format
    ``{"size": int, "name": str?, "operations": [{"name", "arity", "table"}]}``.
    """
    try:
        size = raw["size"]
        ops_raw = raw["operations"]
    except (KeyError, TypeError) as exc:
        raise MalformedTable(f"missing field: {exc}") from None
    if not isinstance(size, int) or isinstance(size, bool) or size < 1:
        raise MalformedTable(f"size must be a positive integer, got {size!r}")
    if not ops_raw:
        raise EmptySignature("algebra has no operations")

    ops = []
    for k, op in enumerate(ops_raw):
        name = str(op.get("name", f"f{k}"))
        arity = op.get("arity")
        if not isinstance(arity, int) or arity < 0:
            raise MalformedTable(f"operation {name}: bad arity {arity!r}")
        table = list(op.get("table", []))
        if len(table) != size**arity:
            raise MalformedTable(
                f"operation {name}: table has {len(table)} entries, expected {size}^{arity} = {size**arity}"
            )
        for e in table:
            if not isinstance(e, (int, np.integer)) or not 0 <= e < size:
                raise MalformedTable(f"operation {name}: entry {e!r} not in [0, {size})")
        ops.append(OperationTable(name, arity, np.array(table, dtype=np.int64)))

    if all(op.arity == 0 for op in ops):
        raise NoPositiveArityOperation("algebra needs an operation of arity >= 1")
    nullary = [op.name for op in ops if op.arity == 0]
    if nullary:
        raise IdempotenceError(f"nullary operations are not allowed: {', '.join(nullary)}")
    return Algebra(size, tuple(ops), raw.get("name"))


def load(path) -> Algebra:
    with open(Path(path), encoding="utf-8") as fh:
        return validate(json.load(fh))


def is_idempotent(a: Algebra) -> tuple[bool, list[tuple[str, int]]]:
    """Return whether every basic operation fixes the diagonal, plus the violating (op, element) pairs."""
    violations = []
    for op in a.operations:
        # diagonal index of (e,...,e) is e * (1 + n + ... + n^(r-1))
        step = sum(a.size**j for j in range(op.arity))
        for e in a.elements:
            if op.table[e * step] != e:
                violations.append((op.name, e))
    return not violations, violations


def size_measure(a: Algebra) -> SizeMeasure:
    counts = Counter(op.arity for op in a.operations)
    value = sum(k * a.size**i for i, k in counts.items())
    return SizeMeasure(value, max(counts), dict(sorted(counts.items())))


def encode(t: Iterable[int], size: int) -> int:
    code = 0
    for x in t:
        code = code * size + int(x)
    return code


def decode(code: int, size: int, m: int) -> tuple[int, ...]:
    out = [0] * m
    for j in range(m - 1, -1, -1):
        code, out[j] = divmod(code, size)
    return tuple(out)
