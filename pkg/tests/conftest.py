import numpy as np
import pytest

from radext.curves import CircleHomeomorphism, builtin, random_trigpoly_family
from radext.periodic import PeriodicFunction

FAMILY_SEED = 20260811


@pytest.fixture(scope="session")
def square():
    return builtin("square")


@pytest.fixture(scope="session")
def ellipse21():
    return builtin("ellipse", a=2, b=1)


@pytest.fixture(scope="session")
def circle1():
    return builtin("circle", s=1)


@pytest.fixture(scope="session")
def shear():
    return builtin("shear")


def make_psi(amplitude):
    return CircleHomeomorphism(
        PeriodicFunction.from_expression(f"t + {amplitude!r}*sin(t)",
                                         period_offset=2 * np.pi),
        curve_id=f"psi=t+{amplitude:g}sin(t)")


@pytest.fixture(scope="session")
def psi05():
    return make_psi(0.5)


@pytest.fixture(scope="session")
def psi02():
    return make_psi(0.2)


@pytest.fixture(scope="session")
def trig_family():
    return random_trigpoly_family(FAMILY_SEED, count=20)
