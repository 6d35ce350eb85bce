import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bipposet.skeleton import SkeletonPoset, build_bip_poset  # noqa: E402
from bipposet.symgroup import Permutation  # noqa: E402

DATA = Path(__file__).parent / "data"


@lru_cache(maxsize=None)
def bip(w: str) -> SkeletonPoset:
    return build_bip_poset(Permutation.parse(w))


@pytest.fixture
def data_dir() -> Path:
    return DATA


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
