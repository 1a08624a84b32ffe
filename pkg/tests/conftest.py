import json
import os

import pytest
from hypothesis import HealthCheck, settings

from syz.laurent import LaurentPolynomial

settings.register_profile(
    "repo", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


def line_poly() -> LaurentPolynomial:
    return LaurentPolynomial(2, [((0, 0), 1), ((1, 0), 1), ((0, 1), 1)])


@pytest.fixture
def line():
    return line_poly()


@pytest.fixture
def line_json(tmp_path):
    p = tmp_path / "line.json"
    p.write_text(json.dumps(line_poly().to_json()))
    return p


ACCEPTANCE_LOG: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LOG


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LOG:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LOG:
            terminalreporter.write_line(line)
