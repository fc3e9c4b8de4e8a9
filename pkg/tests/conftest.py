from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


import contextlib  # noqa: E402

import pytest  # noqa: E402

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """``with criterion(n, label) as note:`` records one pass/fail line for the summary."""

    @contextlib.contextmanager
    def record(number, label):
        details = []
        try:
            yield details.append
        except BaseException as exc:
            _ACCEPTANCE.append((number, label, False, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"))
            raise
        _ACCEPTANCE.append((number, label, True, "; ".join(details)))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, ok, detail in sorted(_ACCEPTANCE, key=lambda t: (t[0] is None, t[0] or 0, t[1])):
        name = label if number is None else f"criterion {number} {label}"
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
