import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ltensor.transforms import make_transform

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

KINDS = ["dft", "dct", "dwt", "id"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=KINDS)
def t44(request):
    return make_transform(request.param, 4, 4)


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.linalg.norm((a - b).ravel()) / max(np.linalg.norm(np.asarray(b).ravel()), 1e-300)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
