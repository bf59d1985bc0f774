import numpy as np
import pytest

from realstab.exceptions import DimensionError, UnknownSignalError
from realstab.realization import SignalSpace


@pytest.fixture
def space():
    return SignalSpace.of(('x', 2), ('u', 1), ('y', 3))


def test_layout(space):
    assert space.total == 6
    assert space.names == ['x', 'u', 'y']
    assert space.slice('y') == slice(3, 6)
    assert list(space.indices(['y', 'u'])) == [3, 4, 5, 2]
    assert space.labels()[:3] == ['x[0]', 'x[1]', 'u[0]']


def test_selector(space):
    e = space.selector('u').evaluate(2.)
    assert e.shape == (6, 1)
    assert np.allclose(e[:, 0].real, [0, 0, 1, 0, 0, 0])


def test_unknown_signal_suggests(space):
    with pytest.raises(UnknownSignalError) as info:
        space.dim('yy')
    assert info.value.details['known'] == ['x', 'u', 'y']
    assert info.value.exit_code == 2


@pytest.mark.parametrize('signals', [[('x', 1), ('x', 2)], [('x', 0)], [('', 1)], []])
def test_invalid_spaces(signals):
    with pytest.raises(DimensionError):
        SignalSpace(signals)


def test_split_vector(space):
    parts = space.split(np.arange(6.))
    assert list(parts['y']) == [3., 4., 5.]


def test_subspace_and_extension(space):
    assert space.subspace(['y', 'x']).names == ['y', 'x']
    assert space.extended(('w', 1)).total == 7
    assert 'w' not in space
    assert space == SignalSpace([(s['name'], s['dim']) for s in space.to_list()])
