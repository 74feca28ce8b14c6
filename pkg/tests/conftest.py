import os
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from fairpart import FairnessParams, parse_instance  # noqa: E402

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# alternating runs of 5: the standard instance with no fair partition
ALT5 = "5R 5B 5R 5B 5R 5B"


@pytest.fixture
def alt5():
    return parse_instance(ALT5)


@pytest.fixture
def alt5_params():
    return FairnessParams(8, Fraction(1, 4), Fraction(5, 8))


def params(sigma, eps, beta="1/2", mode="inclusive"):
    return FairnessParams(sigma, Fraction(eps), Fraction(beta), mode)
