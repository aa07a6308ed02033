"""Shared fixtures: the expensive sweeps behind the acceptance tests.

Each sweep is computed once per session and shared by every test that
reads it.  Build times are collected so the acceptance layer can check
its overall runtime budget.
"""

import time

import pytest

from qcpdetect.models import ModelSpec
from qcpdetect.scan import sweep

ISING_KTS = (0.02, 0.04, 0.06, 0.08, 0.1)
XXZ_FIELD_KTS = (0.1, 0.2, 0.3, 0.4, 0.5)

_ACCEPTANCE_OUTCOMES: dict[str, str] = {}


@pytest.fixture(scope="session")
def sweep_timings():
    """Wall-clock seconds spent building each session sweep fixture."""
    return {}


@pytest.fixture(scope="session")
def ising_sweeps(sweep_timings):
    """Transverse-field Ising chain, L = 12, lam in [0.5, 1.5], eta = 0.01."""
    template = ModelSpec("xy", 12, ISING_KTS[0], gamma=1.0)
    t0 = time.perf_counter()
    results = sweep(template, "lambda", 0.5, 1.5, eta=0.01, kT_list=ISING_KTS)
    sweep_timings["ising"] = time.perf_counter() - t0
    return {r.kT: r for r in results}


@pytest.fixture(scope="session")
def xxz_field_sweeps(sweep_timings):
    """XXZ chain with field h = 12, L = 12, delta in [1.5, 2.5], eta = 0.01."""
    template = ModelSpec("xxz_field", 12, XXZ_FIELD_KTS[0], h=12.0)
    t0 = time.perf_counter()
    results = sweep(template, "delta", 1.5, 2.5, eta=0.01, kT_list=XXZ_FIELD_KTS)
    sweep_timings["xxz_field"] = time.perf_counter() - t0
    return {r.kT: r for r in results}


@pytest.fixture(scope="session")
def xy_thermo_sweep(sweep_timings):
    """Thermodynamic-limit Ising sweep, lam in [0.7, 1.3] at kT = 0.05."""
    template = ModelSpec("xy", None, 0.05, gamma=1.0)
    t0 = time.perf_counter()
    results = sweep(template, "lambda", 0.7, 1.3, eta=0.01, kT_list=(0.05,))
    sweep_timings["xy_thermo"] = time.perf_counter() - t0
    return results[0]


@pytest.fixture(scope="session")
def xxz_zero_field_sweep(sweep_timings):
    """Zero-field XXZ chain, L = 8, delta in [-1.5, 1.5], eta = 0.01."""
    template = ModelSpec("xxz", 8, 0.5)
    t0 = time.perf_counter()
    results = sweep(template, "delta", -1.5, 1.5, eta=0.01, kT_list=(0.5,))
    sweep_timings["xxz_zero_field"] = time.perf_counter() - t0
    return results[0]


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" not in report.nodeid or not name.startswith(
        "test_criterion"
    ):
        return
    if report.when == "call":
        _ACCEPTANCE_OUTCOMES[name] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _ACCEPTANCE_OUTCOMES[name] = f"{report.outcome} (setup)"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_OUTCOMES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_OUTCOMES):
        outcome = _ACCEPTANCE_OUTCOMES[name]
        tag = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{tag:14s} {name}")
