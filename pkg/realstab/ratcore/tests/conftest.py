import pytest

from realstab.ratcore import RationalFunction


@pytest.fixture
def lag():
    """1/(z - 0.5)"""
    return RationalFunction([1.], [-0.5, 1.])
