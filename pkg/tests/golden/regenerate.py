"""Rewrite the golden reports from the current engine: python3 tests/golden/regenerate.py"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "src"))

from spincalogero.cli import run_scenario  # noqa: E402
from spincalogero.scenarios import CATALOG, default_config  # noqa: E402

here = os.path.dirname(os.path.abspath(__file__))
for name in CATALOG:
    report = run_scenario(default_config(name), workers=1)
    with open(os.path.join(here, f"{name}.json"), "w", encoding="utf-8") as fh:
        fh.write(report.to_json(timing=False))
    print(name, report.summary)
