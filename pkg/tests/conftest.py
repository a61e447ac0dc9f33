import random

import pytest
from hypothesis import HealthCheck, settings

from galois_invariants.groups import (
    alternating_group,
    cyclic_group,
    dihedral_group,
    klein_four,
    quaternion_group,
    symmetric_group,
)
from galois_invariants.randomgen import named_group

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SMALL_GROUPS = ["C2", "C3", "C4", "V4", "C6", "S3", "C8", "C2xC4", "C2^3", "D4", "Q8"]

ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def v4():
    return klein_four()


@pytest.fixture(scope="session")
def s3():
    return symmetric_group(3)


@pytest.fixture(params=SMALL_GROUPS)
def small_group(request):
    return named_group(request.param)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
