"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line; the lines are printed at the end
of the pytest run (see ``conftest.py``) and when this file is executed as a
script.  Expected verdicts come from the free-algebra oracle, which is
independent of the local decider.
"""

from __future__ import annotations

import json
import random
import sys
import time
from pathlib import Path

import pytest

from pathmaltsev import corpus
from pathmaltsev.cli import main as cli_main
from pathmaltsev.local import TestingInstance, build_testing_digraph, decide, instance_count
from pathmaltsev.oracle import extract_witness_terms, oracle_decide, verify_witness
from pathmaltsev.pattern import (
    eliminate_inner,
    emit_maltsev_condition,
    gallery,
    parse_condition,
    parse_equations,
    parse_path,
    path_variants,
)

GOLDEN = Path(__file__).parent / "golden"
RESULTS: list[str] = []

TRIVIAL_PATHS = ["path:Fd", "path:Fs Fd Bs"]
CONDITIONS = [name for name, _ in path_variants(3)] + TRIVIAL_PATHS


def record(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    RESULTS.append(line)
    print(line)


def acceptance_corpus():
    """The four named algebras plus 24 random ones with a binary and a ternary operation."""
    return corpus.named_corpus() + corpus.random_corpus(n2=12, n3=12, seed=2024)


@pytest.fixture(scope="module")
def sweep():
    """decide and oracle_decide on every (algebra, condition) pair, with witness checks."""
    rows = {}
    t0 = time.perf_counter()
    for a in acceptance_corpus():
        for cond in CONDITIONS:
            p = parse_condition(cond)
            local = decide(a, p, condition=cond)
            oracle = oracle_decide(a, p)
            witness_ok = None
            if oracle.satisfied and a.size <= 3:
                w = extract_witness_terms(a, p, result=oracle)
                witness_ok, violations = verify_witness(a, p, w)
                witness_ok = witness_ok and not violations
            rows[(a.name, cond)] = {
                "algebra": a,
                "local": local.satisfied,
                "oracle": oracle.satisfied,
                "witness_ok": witness_ok,
            }
    return {"rows": rows, "seconds": time.perf_counter() - t0}


def test_criterion_1_oracle_equivalence(sweep):
    rows = sweep["rows"]
    names = {k[0] for k in rows}
    n_random = sum(1 for n in names if n.startswith(("rand", "reduct")))
    mismatches = [k for k, r in rows.items() if r["local"] != r["oracle"]]
    ok = not mismatches and n_random >= 20 and sweep["seconds"] < 600
    record(
        1, ok,
        f"{len(rows) - len(mismatches)}/{len(rows)} pairs agree over {len(names)} algebras "
        f"({n_random} random), {sweep['seconds']:.0f}s (limit 600s)",
    )
    assert not mismatches, mismatches[:10]
    assert n_random >= 20
    assert sweep["seconds"] < 600


def _expected_table():
    exp = {}
    for n in (1, 2, 3):
        exp[("z2", f"hm:{n}")] = True
        exp[("z2", f"jonsson:{n}")] = False
        exp[("lattice2", f"jonsson:{n}")] = True
        exp[("lattice2", f"hm:{n}")] = False
    exp[("z2", "maltsev")] = True
    exp[("z2", "gumm:1")] = True
    exp[("z2", "majority")] = False
    exp[("lattice2", "majority")] = True
    exp[("lattice2", "maltsev")] = False
    for name, _ in path_variants(3):
        exp[("semilattice2", name)] = False
    for a in acceptance_corpus():
        for cond in TRIVIAL_PATHS:
            exp[(a.name, cond)] = True
    return exp


def test_criterion_2_verdict_table(sweep):
    rows = sweep["rows"]
    exp = _expected_table()
    wrong = [
        (k, v, rows[k]["local"], rows[k]["oracle"])
        for k, v in exp.items()
        if rows[k]["local"] != v or rows[k]["oracle"] != v
    ]
    for a in acceptance_corpus():
        for cond in TRIVIAL_PATHS:
            if decide(a, parse_condition(cond)).verdict != "trivially-satisfied":
                wrong.append(((a.name, cond), "trivially-satisfied"))
    record(2, not wrong, f"{len(exp) - len(wrong)}/{len(exp)} pinned verdicts match")
    assert not wrong, wrong


def test_criterion_3_witnesses(sweep):
    rows = sweep["rows"]
    checked = [r for r in rows.values() if r["witness_ok"] is not None]
    bad = [k for k, r in rows.items() if r["witness_ok"] is False]
    missing = [k for k, r in rows.items() if r["oracle"] and r["witness_ok"] is None]
    ok = not bad and not missing and checked
    record(3, bool(ok), f"{len(checked) - len(bad)}/{len(checked)} witnesses verified, {len(missing)} missing")
    assert not bad and not missing


def _layer_properties_hold(a, inst):
    g = build_testing_digraph(a, inst)
    path = inst.path
    b = inst.b
    for i, e in enumerate(path.edges, start=1):
        lo = set(g.potatoes[i - 1].tuples())
        hi = set(g.potatoes[i].tuples())
        edges = g.edges(i)
        # (earlier layer, later layer) view of every edge, regardless of orientation
        pairs = {((u, v) if e.forward else (v, u)): s for (u, v), s in edges.items()}
        if {u for u, _ in pairs} != lo or {v for _, v in pairs} != hi:
            return False
        if e.solid:
            solid = [uv for uv, s in pairs.items() if s]
            if {u for u, _ in solid} != lo or {v for _, v in solid} != hi:
                return False
        if e.forward:
            if any((p, b[i]) not in edges for p in lo):
                return False
        else:
            if any((p, b[i - 1]) not in edges for p in hi):
                return False
    return True


def test_criterion_4_testing_digraph_invariants():
    rng = random.Random(4)
    algebras = acceptance_corpus() + [corpus.chain_lattice(3), corpus.affine_zn(3), corpus.random_idempotent(4, 3)]
    paths = [p for _, p in path_variants(3)] + [parse_path(s) for s in ("Bs Fs Bd", "Fd Bs", "Bs", "Fs Fd Bs")]
    samples, failures = 1200, []
    for _ in range(samples):
        a = rng.choice(algebras)
        p = rng.choice(paths)
        pick = lambda count: [rng.randrange(a.size) for _ in range(count)]  # noqa: E731
        inst = TestingInstance.ones(p, pick(p.n + 1), pick(p.n + 1), pick(p.n), pick(p.n))
        if not _layer_properties_hold(a, inst):
            failures.append((a.name, p.dsl, inst.to_dict()))
    record(4, not failures, f"{samples - len(failures)}/{samples} sampled testing digraphs satisfy all four properties")
    assert not failures, failures[:3]


def _holds(a, cond, cache):
    """Verdict of the local decider, or of the oracle when the scan would be large."""
    key = (a.name, cond)
    if key not in cache:
        p = parse_condition(cond)
        if instance_count(a.size, p) <= 1 << 20:
            cache[key] = decide(a, p).satisfied
        else:
            cache[key] = oracle_decide(a, p).satisfied
    return cache[key]


def test_criterion_5_implications(sweep):
    cache = {k: r["local"] for k, r in sweep["rows"].items()}
    rules = []
    for n in (1, 2, 3):
        for name in ("jonsson", "dir-jonsson", "hm"):
            rules.append((f"{name}:{n}", f"{name}:{n + 1}"))
        rules.append((f"jonsson:{n}", f"gumm:{n}"))
        rules.append(("majority", f"jonsson:{n}"))
    rules.append(("maltsev", "gumm:1"))
    violations, used = [], 0
    for a in acceptance_corpus():
        for pre, post in rules:
            if _holds(a, pre, cache):
                used += 1
                if not _holds(a, post, cache):
                    violations.append((a.name, pre, post))
    record(5, not violations, f"{len(rules)} implications, {used} with true premise, {len(violations)} violations")
    assert not violations, violations


GOLDEN_CASES = {
    "maltsev": "maltsev.txt",
    "majority": "majority.txt",
    "jonsson:3": "jonsson_3.txt",
    "gumm:2": "gumm_2.txt",
    "dir-jonsson:3": "dir-jonsson_3.txt",
    "dir-gumm:3": "dir-gumm_3.txt",
    "hm:3": "hm_3.txt",
}


def test_criterion_6_equation_emission():
    bad = []
    for cond, fname in GOLDEN_CASES.items():
        p = parse_condition(cond)
        emitted = eliminate_inner(emit_maltsev_condition(p), p.n)
        golden = parse_equations((GOLDEN / fname).read_text(encoding="utf-8"))
        if emitted.keys() != golden.keys() or len(emitted) != len(golden):
            bad.append(cond)
    record(6, not bad, f"{len(GOLDEN_CASES) - len(bad)}/{len(GOLDEN_CASES)} emitted systems match the golden files")
    assert not bad, bad


def test_criterion_7_instance_counts(capsys, tmp_path):
    runs = [(corpus.random_idempotent(2, 31), name) for name, _ in path_variants(3)]
    three = corpus.random_reduct(5, "median")
    runs += [(three, name) for name, p in path_variants(3) if 2 * p.n + 2 * p.k + 2 <= 10]
    bad, rows = [], []
    for a, cond in runs:
        path = tmp_path / f"{a.name}.json"
        path.write_text(a.to_json())
        code = cli_main(["bench", "--algebra", str(path), "--condition", cond, "--json"])
        (row,) = json.loads(capsys.readouterr().out)
        rows.append(row)
        expected = a.size ** (2 * row["n"] + 2 * row["k"] + 2)
        if code != 0 or row["observed_instances"] != expected or row["expected_instances"] != expected:
            bad.append((a.name, cond, row["observed_instances"], expected))
    record(7, not bad, f"{len(rows) - len(bad)}/{len(rows)} bench runs report observed = |A|^(2n+2k+2)")
    assert not bad, bad


def test_criterion_8_performance():
    a5 = corpus.random_idempotent(5, 7, arities=(2,))
    t0 = time.perf_counter()
    r5 = decide(a5, gallery("majority"), exhaustive=True)
    t_major = time.perf_counter() - t0
    a4 = corpus.random_idempotent(4, 8, arities=(2, 3))
    t0 = time.perf_counter()
    r4 = decide(a4, gallery("jonsson", 2), exhaustive=True)
    t_jonsson = time.perf_counter() - t0
    ok = (
        t_major < 60
        and t_jonsson < 600
        and r5.stats["instances_checked"] == 5**6
        and r4.stats["instances_checked"] == 4**10
    )
    record(
        8, ok,
        f"majority on |A|=5: {t_major:.1f}s for {r5.stats['instances_checked']} instances (limit 60s); "
        f"jonsson:2 on |A|=4: {t_jonsson:.1f}s for {r4.stats['instances_checked']} instances (limit 600s)",
    )
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
