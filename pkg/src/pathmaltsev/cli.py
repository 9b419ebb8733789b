"""Command line front end.

Verdicts and reports go to stdout as JSON, one-line summaries to stderr.
Exit codes: 0 success (whatever the verdict), 2 invalid input, 3 algebra not
idempotent, 4 a closure exceeded its cap.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import algebra as alg
from .closure import DEFAULT_CAP
from .errors import CapExceeded, NotIdempotent, PathMaltsevError
from .local import decide, instance_count
from .oracle import extract_witness_terms, oracle_decide, verify_witness
from .pattern import emit_maltsev_condition, parse_condition

EXIT_OK, EXIT_INPUT, EXIT_NOT_IDEMPOTENT, EXIT_CAP = 0, 2, 3, 4


class InputError(PathMaltsevError):
    pass


@dataclass
class RunConfig:
    command: str
    algebras: list[str] = field(default_factory=list)
    conditions: list[str] = field(default_factory=list)
    canonical: bool = False
    workers: int = 1
    cap: int = DEFAULT_CAP
    emit_terms: bool = False
    allow_large: bool = False
    unsubstituted: bool = False
    as_json: bool = False

    @property
    def algebra(self) -> str:
        if len(self.algebras) != 1:
            raise InputError(f"{self.command} takes exactly one --algebra")
        return self.algebras[0]

    @property
    def condition(self) -> str:
        if len(self.conditions) != 1:
            raise InputError(f"{self.command} takes exactly one --condition")
        return self.conditions[0]


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=False))


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(path: str):
    try:
        return alg.load(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read algebra {path}: {exc}") from None


def cmd_check(cfg: RunConfig) -> int:
    a = _load(cfg.algebra)
    p = parse_condition(cfg.condition)
    report = decide(a, p, canonical=cfg.canonical, workers=cfg.workers, cap=cfg.cap, condition=cfg.condition)
    _emit(report.to_dict(timing=not cfg.canonical))
    _note(f"{a.name or cfg.algebra}: {cfg.condition} {report.verdict} ({report.stats['instances_checked']} instances)")
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    a = _load(cfg.algebra)
    p = parse_condition(cfg.condition)
    res = oracle_decide(a, p, cap=cfg.cap, allow_large=cfg.allow_large)
    out = {"condition": cfg.condition, "verdict": res.verdict, "stats": res.stats}
    if cfg.emit_terms and res.satisfied:
        w = extract_witness_terms(a, p, cap=cfg.cap, allow_large=cfg.allow_large, result=res)
        ok, violations = verify_witness(a, p, w)
        out["witness"] = w.to_dict()
        out["witness_verified"] = ok
        if violations:
            out["violations"] = [list(v) for v in violations]
    _emit(out)
    _note(f"{a.name or cfg.algebra}: {cfg.condition} {res.verdict} (|K| explored = {res.stats['k_size']})")
    return EXIT_OK


def cmd_emit(cfg: RunConfig) -> int:
    p = parse_condition(cfg.condition)
    print(emit_maltsev_condition(p, substitute=not cfg.unsubstituted).to_text())
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    a = _load(cfg.algebra)
    ok, violations = alg.is_idempotent(a)
    m = alg.size_measure(a)
    _emit({
        "valid": True,
        "name": a.name,
        "size": a.size,
        "operations": [{"name": op.name, "arity": op.arity} for op in a.operations],
        "idempotent": ok,
        "idempotence_violations": [list(v) for v in violations],
        "size_measure": m.value,
        "max_arity": m.max_arity,
    })
    return EXIT_OK


def bench_rows(cfg: RunConfig) -> list[dict]:
    rows = []
    for path in cfg.algebras:
        a = _load(path)
        norm = alg.size_measure(a).value
        for cond in cfg.conditions:
            p = parse_condition(cond)
            t0 = time.perf_counter()
            report = decide(a, p, workers=cfg.workers, cap=cfg.cap, exhaustive=True, condition=cond)
            exponent = 2 * p.n + 2 * p.k + 2
            rows.append({
                "algebra": a.name or path,
                "size": a.size,
                "condition": cond,
                "n": p.n,
                "k": p.k,
                "verdict": report.verdict,
                "expected_instances": instance_count(a.size, p),
                "observed_instances": report.stats["instances_checked"],
                "exponent": exponent,
                "closures": report.stats["closures"],
                "cache_hits": report.stats["cache_hits"],
                # polynomial bound r |A|^(2n+2k+2) ||A||^3 (||A||^2 without solid edges)
                "bound": alg.size_measure(a).max_arity * a.size**exponent * norm ** (3 if p.k else 2),
                "wall_time": time.perf_counter() - t0,
            })
    return rows


def cmd_bench(cfg: RunConfig) -> int:
    if not cfg.algebras or not cfg.conditions:
        raise InputError("bench needs at least one --algebra and one --condition")
    rows = bench_rows(cfg)
    if cfg.as_json:
        _emit(rows)
        return EXIT_OK
    header = f"{'algebra':<16} {'cond':<14} {'verdict':<20} {'expected':>10} {'observed':>10} {'closures':>9} {'hits':>9} {'time[s]':>8}"
    print(header)
    for r in rows:
        print(
            f"{r['algebra']:<16} {r['condition']:<14} {r['verdict']:<20} {r['expected_instances']:>10} "
            f"{r['observed_instances']:>10} {r['closures']:>9} {r['cache_hits']:>9} {r['wall_time']:>8.2f}"
        )
    return EXIT_OK


COMMANDS = {"check": cmd_check, "oracle": cmd_oracle, "emit": cmd_emit, "validate": cmd_validate, "bench": cmd_bench}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathmaltsev", description="Decide path Maltsev conditions in finite idempotent algebras.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--algebra", action="append", default=[], metavar="FILE")
        sp.add_argument("--condition", action="append", default=[], metavar="SPEC",
                        help="name, name:n, or path:<tokens> such as 'path:Fs Bd'")
        sp.add_argument("--canonical", action="store_true", help="lexicographically least counterexample, no timings")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="closure element limit")
        sp.add_argument("--emit-terms", action="store_true")
        sp.add_argument("--allow-large", action="store_true", help="run the oracle on algebras with more than 3 elements")
        sp.add_argument("--unsubstituted", action="store_true", help="emit: keep s_0 and s_n as symbols")
        sp.add_argument("--json", dest="as_json", action="store_true", help="bench: JSON instead of a table")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        algebras=args.algebra,
        conditions=args.condition,
        canonical=args.canonical,
        workers=args.workers,
        cap=args.cap,
        emit_terms=args.emit_terms,
        allow_large=args.allow_large,
        unsubstituted=args.unsubstituted,
        as_json=args.as_json,
    )
    try:
        return COMMANDS[cfg.command](cfg)
    except NotIdempotent as exc:
        _note(f"error: {exc}")
        return EXIT_NOT_IDEMPOTENT
    except CapExceeded as exc:
        _note(f"error: {exc}")
        return EXIT_CAP
    except PathMaltsevError as exc:
        _note(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
