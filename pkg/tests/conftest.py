"""Collects acceptance-criterion outcomes and prints one line per criterion."""

from __future__ import annotations

import pytest

_RESULTS: dict[str, list[bool]] = {}
_TITLES: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            cid, title = mark.args
            _TITLES[cid] = title


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _RESULTS.setdefault(mark.args[0], []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_RESULTS, key=int):
        status = "PASS" if all(_RESULTS[cid]) else "FAIL"
        terminalreporter.write_line(f"criterion {cid:>2}: {status}  {_TITLES.get(cid, '')}")
