from fractions import Fraction

import pytest

from nonsos import fixtures
from nonsos.certificate import certify
from nonsos.configuration import PointConfig, system_from_points


@pytest.fixture(scope="session")
def motzkin():
    return fixtures.motzkin()


@pytest.fixture(scope="session")
def reznick():
    return fixtures.reznick()


@pytest.fixture(scope="session")
def reznick_points():
    """The nine points of the seven-zero example with the listed representatives."""
    return [tuple(map(Fraction, v)) for v in fixtures.REZNICK_ZEROS + [fixtures.REZNICK_EXTRA, fixtures.REZNICK_RESIDUAL]]


@pytest.fixture(scope="session")
def reznick_system(reznick_points):
    return system_from_points(PointConfig(3, tuple(reznick_points), 7))


@pytest.fixture(scope="session")
def reznick_cert(reznick):
    config = PointConfig(3, tuple(fixtures.REZNICK_ZEROS) + (fixtures.REZNICK_EXTRA,), 7)
    return certify(reznick, config, N=10**9)[0]


@pytest.fixture(scope="session")
def motzkin_cert(motzkin):
    config = PointConfig(3, tuple(fixtures.MOTZKIN_ZEROS + fixtures.MOTZKIN_EXTRAS), 6)
    return certify(motzkin, config)[0]


@pytest.fixture(scope="session")
def failing_system():
    pts = tuple(fixtures.MOTZKIN_ZEROS + fixtures.FAILING_EXTRAS) + (fixtures.FAILING_RESIDUAL,)
    return system_from_points(PointConfig(3, pts, 6))


@pytest.fixture
def write(tmp_path):
    """Write text to a file under tmp_path and return its path as a string."""

    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write
