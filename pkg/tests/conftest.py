import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from ramseycat.generate import involution_example, one_object_category, two_morphism_example

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def ex_t2():
    return two_morphism_example()


@pytest.fixture
def aut2():
    return involution_example()


@pytest.fixture
def one():
    return one_object_category()


@pytest.fixture
def rng():
    return random.Random(20241015)


@pytest.fixture
def data_dir():
    return DATA


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
