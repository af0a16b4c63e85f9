import pytest

from paddlesat.scenario import MissionScenario, baseline_scenario


@pytest.fixture(scope="session")
def baseline() -> MissionScenario:
    return baseline_scenario()


@pytest.fixture(scope="session")
def baseline_report(baseline):
    from paddlesat.scenario import evaluate

    return evaluate(baseline)


# -- acceptance summary ----------------------------------------------------------

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    if failed or number not in _CRITERIA:
        _CRITERIA[number] = (title, "FAIL" if failed else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, verdict = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {verdict}  {title}")
