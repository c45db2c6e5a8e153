import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

# property tests draw seeds for exprgen; a fixed database-free profile keeps runs repeatable
settings.register_profile("repeatable", derandomize=True, database=None)
settings.load_profile("repeatable")


# -- acceptance summary --------------------------------------------------------

_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when == "collect":
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, [title, True, 0.0])
    entry[2] += call.stop - call.start
    if call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception):
        entry[1] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, seconds = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({seconds:.2f} s)")
