from pathlib import Path

import pytest

from mnlg.estimator import demo_grammar_path
from mnlg.repository import load_repository

DATA = Path(demo_grammar_path()).parent
PLANS = DATA / "plans"
BENCH = DATA / "bench"


@pytest.fixture(scope="session")
def repo():
    return load_repository(demo_grammar_path())


@pytest.fixture(scope="session")
def grammar_path():
    return demo_grammar_path()


_ACCEPTANCE = {}


class _Record:
    def __init__(self, number, title):
        self.number, self.title, self.detail = number, title, ""

    def __enter__(self):
        _ACCEPTANCE[self.number] = (self.title, False, "did not finish")
        return self

    def __exit__(self, exc_type, exc, tb):
        detail = self.detail if exc is None else f"{exc_type.__name__}: {exc}"[:200]
        _ACCEPTANCE[self.number] = (self.title, exc is None, detail)
        return False


@pytest.fixture
def acceptance():
    return _Record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[n]
        line = f"{'PASS' if ok else 'FAIL'} [{n}] {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
