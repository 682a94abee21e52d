import functools

import pytest

from pglekr.finite_field import field_of_order
from pglekr.projective_group import enumerate_pgl


@functools.lru_cache(maxsize=None)
def pgl_table(q):
    return enumerate_pgl(field_of_order(q))


@pytest.fixture(scope="session")
def pgl():
    return pgl_table


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.LINES:
        terminalreporter.write_line(line)
