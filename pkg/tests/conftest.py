import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from modsram.arith import Modulus  # noqa: E402

SECP256K1_P = 2 ** 256 - 2 ** 32 - 977
BN254_P = 0x30644E72E131A029B85045B68181585D97816A916871CA8D3C208C16D87CFD47

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        num, title = mark.args
        prev = _criteria.get(num, (title, True))
        _criteria[num] = (title, prev[1] and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, ok = _criteria[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(scope="session")
def secp():
    return Modulus(SECP256K1_P)


@pytest.fixture(scope="session")
def bn254():
    return Modulus(BN254_P)
