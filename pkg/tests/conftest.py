import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

# reports are assembled identically in either mode; keep the test run serial
os.environ.setdefault("SPINCALOGERO_WORKERS", "1")

import pytest  # noqa: E402

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


@pytest.fixture(scope="session")
def catalog_reports():
    """Default-config report of every catalog scenario, computed once per session."""
    from spincalogero.cli import run_scenario
    from spincalogero.scenarios import CATALOG, default_config

    return {name: run_scenario(default_config(name), workers=1) for name in CATALOG}


# acceptance verdicts, filled by test_acceptance and echoed after the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
