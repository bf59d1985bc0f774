import pytest

from realstab.ratcore import RationalFunction
from realstab.tfmat import TransferMatrix


@pytest.fixture
def lag():
    """1/(z - 0.5)"""
    return RationalFunction([1.], [-0.5, 1.])


@pytest.fixture
def G(lag):
    return TransferMatrix.scalar(lag)


@pytest.fixture
def K():
    return TransferMatrix.constant(0.3)
