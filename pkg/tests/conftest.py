import contextlib
import time

import pytest

_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """``with criterion(3, "title"):`` records PASS/FAIL for the acceptance summary."""

    @contextlib.contextmanager
    def record(number, title):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException as e:
            _ACCEPTANCE[number] = (False, title, time.perf_counter() - t0, repr(e)[:200])
            raise
        _ACCEPTANCE[number] = (True, title, time.perf_counter() - t0, "")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, title, secs, err = _ACCEPTANCE[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title} ({secs:.1f} s)"
        if err:
            line += f" -- {err}"
        terminalreporter.write_line(line)
