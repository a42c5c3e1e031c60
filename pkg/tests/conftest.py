import numpy as np
import pytest
from hypothesis import settings

from evovcs import BinaryImage

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def half_secret(h, w):
    """Left half white, right half black."""
    a = np.zeros((h, w), dtype=np.uint8)
    a[:, w // 2 :] = 1
    return BinaryImage(a)


def random_secret(h, w, seed=0):
    return BinaryImage(np.random.default_rng(seed).integers(0, 2, (h, w), dtype=np.uint8))


@pytest.fixture
def small_secret():
    return half_secret(16, 24)


@pytest.fixture
def noisy_secret():
    return random_secret(12, 20, seed=3)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
