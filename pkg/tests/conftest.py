import numpy as np
import pytest

from dominowave.acoustics import SynthesisParams, synthesize_collapse


def click_train(rate, duration=30.0, snr_db=np.inf, seed=0, start=0.1, fs=44100):
    times = np.arange(start, duration - 0.1, 1.0 / rate)
    return synthesize_collapse(times, SynthesisParams(snr_db=snr_db, noise_seed=seed), fs)


@pytest.fixture
def make_click_train():
    return click_train


_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.outcome != "passed"):
        if report.when in ("call", "setup"):
            _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}")
