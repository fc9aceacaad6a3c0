from functools import lru_cache

import pytest

from dynkincoh.diagram import named_diagram
from dynkincoh.group import build_group


@lru_cache(maxsize=None)
def group(label):
    return build_group(named_diagram(label))


@pytest.fixture
def G():
    return group


ACCEPTANCE = {}


def record(criterion, ok, detail=""):
    ACCEPTANCE[criterion] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
