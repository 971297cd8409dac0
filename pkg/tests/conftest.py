import json
from pathlib import Path

import pytest

GOLDEN_DIR = Path(__file__).parent / "golden"
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_addoption(parser):
    parser.addoption("--regen-goldens", action="store_true", default=False,
                     help="rewrite golden files from current output instead of comparing")


@pytest.fixture
def golden(request):
    regen = request.config.getoption("--regen-goldens")

    def check(name: str, text: str):
        path = GOLDEN_DIR / name
        if regen:
            path.write_text(text)
            return
        assert path.exists(), f"missing golden {name}; run pytest --regen-goldens"
        assert text == path.read_text(), f"output differs from golden {name}"

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])


def load_json(text: str):
    return json.loads(text)
