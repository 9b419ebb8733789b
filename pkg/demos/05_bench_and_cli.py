"""Instance accounting and timing, through the command line front end.

Run: python demos/05_bench_and_cli.py
"""

from __future__ import annotations

from pathlib import Path

from pathmaltsev.cli import main

HERE = Path(__file__).parent
alg = HERE / "algebras"

main(["bench", "--algebra", str(alg / "lattice.json"), "--algebra", str(alg / "chain3.json"),
      "--condition", "maltsev", "--condition", "majority", "--condition", "jonsson:2"])

print("\ncanonical check, as a script would consume it:")
main(["check", "--algebra", str(alg / "semilattice.json"), "--condition", "hm:2", "--canonical"])

print("\nexit code for a non-idempotent table:",
      main(["check", "--algebra", str(alg / "not_idempotent.json"), "--condition", "majority"]))
