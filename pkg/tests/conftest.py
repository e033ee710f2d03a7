import random
import sys

import numpy as np
import pytest

from wpb.boolfn import BooleanFunction


@pytest.fixture
def rng():
    return random.Random(20240601)


def random_function(n, seed):
    r = np.random.default_rng(seed)
    return BooleanFunction(n, r.integers(0, 2, size=1 << n, dtype=np.uint8))


def brute_popcount(x):
    return bin(x).count("1")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
