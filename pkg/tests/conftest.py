import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dramhx.thermo import CaseSpec, DesignVector, LayoutConfig, StreamSpec

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# Literature designs used as references (SI units, baffle cut as a fraction)
SINGLE_OBJECTIVE = (0.06, 0.25, 0.000381, 0.003, 10.7, 0.0381, 0.003405)
MULTI_OBJECTIVE = (0.079, 0.16515, 0.000204, 0.003279, 3.426, 0.019578, 0.001652)
DRAM_MEAN = (0.0956, 0.2310, 0.00024864, 0.0034, 4.292, 0.0234, 0.00205)


def water():
    return StreamSpec("Cooling water", 30.0, 33.0, 37.21, 1000.0, 4186.8, 0.00071, 0.63,
                      1278142.0, 0.0004, "stainless steel")


def naphtha():
    return StreamSpec("Naphtha", 2.7, 114.0, 40.0, 656.0, 2646.06, 3.7e-4, 0.11,
                      738767.0, 0.0002, "carbon steel")


@pytest.fixture
def case():
    return CaseSpec(tube=water(), shell=naphtha(), wall_conductivity=16.0)


@pytest.fixture
def layout():
    return LayoutConfig()


@pytest.fixture
def dram_mean():
    return DesignVector(*DRAM_MEAN)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
