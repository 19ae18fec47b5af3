import functools
from pathlib import Path

import pytest

from fbcount.curve import load_spec
from fbcount.pipeline import analyze

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# fixtures by role; right_angle is deliberately non-generic
SMOOTH_NO_INFLECTION = ["circle", "skew_circle", "limacon_looped", "limacon_deep_loop",
                        "fig7_left", "fig7_right"]
WITH_INFLECTIONS = ["limacon_convex", "limacon_dimpled", "wavy3", "wavy5", "figure_eight_a",
                    "figure_eight_b", "planar_two_inflections", "planar_six_inflections"]
CUSPED = ["cardioid", "cardioid_wide", "two_cusp", "deltoid", "deltoid_wide", "epicycloid3"]
GENERIC = SMOOTH_NO_INFLECTION + WITH_INFLECTIONS + CUSPED


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.json"


@functools.lru_cache(maxsize=None)
def curve(name: str):
    return load_spec(fixture_path(name))


@functools.lru_cache(maxsize=None)
def analysis(name: str, kbar: bool = False):
    a = analyze(curve(name), kbar=kbar)
    a.report.fill_residuals()
    return a


@pytest.fixture
def get_analysis():
    return analysis


@pytest.fixture
def get_curve():
    return curve


# one line per acceptance criterion, printed after the run
CRITERIA: dict = {}


def record(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    CRITERIA[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
