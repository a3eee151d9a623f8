import json
import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile(
    "thorough", max_examples=1000, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"

_CRITERIA: dict[int, tuple[str, str, str]] = {}


@pytest.fixture(scope="session")
def golden():
    return json.loads((DATA / "golden.json").read_text())


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    _CRITERIA[number] = ("PASS" if ok else "FAIL", title, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[number]
        terminalreporter.write_line(f"{status} criterion {number}: {title} ({detail})")
