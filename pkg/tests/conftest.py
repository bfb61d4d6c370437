import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion -> (passed, title, detail), filled through the ``criterion`` fixture
ACCEPTANCE: dict = {}


@pytest.fixture
def criterion():
    def record(key, title, ok, detail=""):
        ACCEPTANCE[key] = (bool(ok), title, detail)
        print(f"[{'PASS' if ok else 'FAIL'}] {key}. {title}: {detail}")
        return bool(ok)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {k}. {title}: {detail}")
