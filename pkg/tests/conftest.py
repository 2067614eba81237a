import pytest

_RESULTS = pytest.StashKey[list]()
_NOTES = pytest.StashKey[list]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.stash[_RESULTS] = []


@pytest.fixture
def note(request):
    """Attach a detail string to the acceptance line of this test."""
    notes = request.node.stash.setdefault(_NOTES, [])
    return notes.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    detail = "; ".join(item.stash.get(_NOTES, []))
    if rep.failed and call.excinfo is not None:
        detail = (detail + "; " if detail else "") + call.excinfo.exconly().splitlines()[0][:160]
    status = "PASS" if rep.passed else "FAIL"
    item.config.stash[_RESULTS].append((number, status, title, rep.duration, detail))


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title, secs, detail in sorted(results):
        terminalreporter.write_line(f"{status} criterion {number}: {title} [{secs:.1f}s] {detail}")
