import pytest

VERDICTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance test; ``note`` adds detail."""
    info = {"detail": ""}

    def note(text: str) -> None:
        info["detail"] = text

    yield note
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    line = f"{'PASS' if ok else 'FAIL'} {request.node.name}: {info['detail']}"
    VERDICTS.append(line)
    print(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
