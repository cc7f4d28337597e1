import pytest

# filled by test_acceptance.py: criterion number -> (line, passed)
ACCEPTANCE: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    crit = getattr(item.function, "criterion", None)
    if crit is None or rep.when != "call":
        return
    n, title, limit = crit
    status = "PASS" if rep.passed else "FAIL"
    limit_txt = f"limit {limit:.0f} s" if limit else "no time limit"
    ACCEPTANCE[n] = f"criterion {n}: {status}  {title}  ({rep.duration:.1f} s, {limit_txt})"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
