import pytest

from biphoton_duality import analysis, model
from biphoton_duality.reference import TABLE2


@pytest.fixture(scope="session")
def case_models():
    return {c: model.calibrate(TABLE2[c]["dnu_plus"], TABLE2[c]["dnu_minus"], label=c)
            for c in ("a", "b", "c")}


@pytest.fixture(scope="session")
def case_b(case_models):
    return case_models["b"]


@pytest.fixture(scope="session")
def case_b_fields(case_b):
    return analysis.model_fields(case_b)


@pytest.fixture(scope="session")
def case_b_report(case_b_fields):
    return analysis.widths_report(*case_b_fields)


# acceptance criteria append (number, passed, message) here; echoed after the run
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok, msg in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {msg}")
