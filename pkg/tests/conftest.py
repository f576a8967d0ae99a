import mpmath as mp
import pytest


@pytest.fixture(autouse=True)
def _reset_mp_precision():
    # the mpmath context is global; keep tests from leaking precision changes
    prec = mp.mp.prec
    yield
    mp.mp.prec = prec


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    from icehankel.verify import format_result

    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(format_result(results[n], verbose=False))
