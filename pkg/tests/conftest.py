import math

import pytest

from spdc_walkoff.dispersion import COLLINEAR, NONCOLLINEAR, CrystalConfig, load_crystal, phase_match_angle
from spdc_walkoff.pump import PumpConfig

PUMP_NM = 355e-9


@pytest.fixture(scope="session")
def bbo():
    return load_crystal("BBO")


@pytest.fixture(scope="session")
def theta_pm(bbo):
    return phase_match_angle(bbo, PUMP_NM)


@pytest.fixture(scope="session")
def crystal_1mm(bbo, theta_pm):
    return CrystalConfig(model=bbo, theta_rad=theta_pm, length_m=1e-3, geometry=COLLINEAR)


@pytest.fixture(scope="session")
def crystal_noncollinear(bbo):
    return CrystalConfig(model=bbo, theta_rad=math.radians(39.935), length_m=1e-3, geometry=NONCOLLINEAR)


def make_pump(**kw):
    base = dict(wavelength_m=PUMP_NM, waist_m=30e-6)
    base.update(kw)
    return PumpConfig(**base)


@pytest.fixture
def pump_plain():
    return make_pump()
