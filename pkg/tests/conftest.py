import os

import pytest


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    """Keep the universal polynomial cache out of the working tree."""
    path = tmp_path_factory.mktemp("witt-cache")
    old = os.environ.get("WITT_CACHE_DIR")
    os.environ["WITT_CACHE_DIR"] = str(path)
    yield path
    if old is None:
        os.environ.pop("WITT_CACHE_DIR", None)
    else:
        os.environ["WITT_CACHE_DIR"] = old


# one PASS/FAIL line per acceptance criterion, printed after the run
_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py::" not in report.nodeid:
        return
    item = report.nodeid.split("::", 1)[1]
    if item.startswith("test_c") and "_" in item:
        _criteria[item] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for item in sorted(_criteria):
        num, name = item[len("test_c"):].split("_", 1)
        terminalreporter.write_line(f"criterion {int(num)} ({name.replace('_', ' ')}): {_criteria[item]}")
