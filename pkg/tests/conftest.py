import json
import sys
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FROZEN = json.loads(Path(__file__).with_name("frozen_values.json").read_text())

LAMBDAS = (-0.4, 0.0, 0.5, 1.0, 2.0)


@pytest.fixture(scope="session")
def frozen():
    return FROZEN


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.REPORT):
        terminalreporter.write_line(mod.REPORT[key])
