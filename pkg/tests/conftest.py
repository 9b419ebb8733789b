from __future__ import annotations

import json
from pathlib import Path

import pytest

from pathmaltsev import corpus

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def semilattice():
    return corpus.semilattice2()


@pytest.fixture
def lattice():
    return corpus.lattice2()


@pytest.fixture
def z2():
    return corpus.z2_minority()


@pytest.fixture
def trivial():
    return corpus.trivial1()


@pytest.fixture
def algebra_file(tmp_path):
    """Write an algebra (or raw dict) to a JSON file and return its path."""

    def write(a, name="a.json"):
        raw = a if isinstance(a, dict) else a.to_dict()
        path = tmp_path / name
        path.write_text(json.dumps(raw))
        return str(path)

    return write


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
