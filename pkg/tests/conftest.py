import pytest

ACCEPTANCE = {}


@pytest.fixture
def verdict(request):
    """Record an acceptance outcome; the line is printed in the terminal summary."""
    key = request.node.name

    def record(label, ok, detail=""):
        ACCEPTANCE[key] = (label, ok, detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        label, ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
