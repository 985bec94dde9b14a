from __future__ import annotations

import sys
from importlib.resources import files
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tquiver.cli import load  # noqa: E402

FIXTURES = Path(str(files("tquiver") / "fixtures"))

# criterion number -> (passed, summary); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def fixture():
    return lambda name: load(FIXTURES / f"{name}.quiver")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'pass' if ok else 'FAIL'}  {msg}")
