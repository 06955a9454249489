import pytest

_RESULTS = {}


class _Criterion:
    def __init__(self, nodeid):
        self.nodeid = nodeid

    def __call__(self, label, title):
        _RESULTS[self.nodeid] = {"label": label, "title": title, "detail": "", "outcome": None}

    def detail(self, text):
        _RESULTS[self.nodeid]["detail"] = text


@pytest.fixture
def criterion(request):
    return _Criterion(request.node.nodeid)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rec = _RESULTS.get(item.nodeid)
    if rec is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        rec["outcome"] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for rec in sorted(_RESULTS.values(), key=lambda r: r["label"]):
        line = f"{rec['outcome'] or 'FAIL'} {rec['label']} {rec['title']}"
        if rec["detail"]:
            line += f" ({rec['detail']})"
        terminalreporter.write_line(line)
