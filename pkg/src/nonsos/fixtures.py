"""Worked instances used by the ``examples`` command and the test-suite."""

from __future__ import annotations

from fractions import Fraction as Q

from .forms import Form

_x, _y, _z = (Form.variable(3, i) for i in range(3))


def motzkin() -> Form:
    return _x**4 * _y**2 + _x**2 * _y**4 - (_x**2 * _y**2 * _z**2).scale(3) + _z**6


MOTZKIN_ZEROS = [(1, 0, 0), (0, 1, 0), (1, 1, 1), (-1, 1, 1), (1, -1, 1), (1, 1, -1)]
MOTZKIN_EXTRAS = [(0, 4, 1), (4, 0, 1)]
MOTZKIN_RESIDUAL = (Q(1), Q(1), Q(-7, 2))
MOTZKIN_L_VALUE_N100 = Q(-1484936, 2143157)
MOTZKIN_PENCIL = [
    -(_z**3).scale(16) + (_x**2 * _z).scale(15) + _y**2 * _z + (_y**2 * _x).scale(56) - (_z**2 * _x).scale(56),
    -(_z**3).scale(4) - _x**2 * _y + (_x**2 * _z).scale(4) + (_y**2 * _x).scale(15) - (_z**2 * _x).scale(15) + _z**2 * _y,
]

FAILING_EXTRAS = [(Q(2, 7), Q(2, 3), 1), (Q(2, 3), Q(2, 7), 1)]
FAILING_RESIDUAL = (Q(1), Q(1), Q(65, 34))
FAILING_U = [Q(-264, 7), Q(-264, 7), Q(891, 31), Q(-99, 10), Q(-99, 10), Q(1), Q(43659, 160), Q(43659, 160), Q(-4913, 62)]


def reznick() -> Form:
    x, y, z = _x, _y, _z
    return (
        x**2 * y**2 * (x - y) ** 2
        + y**2 * z**2 * (y - z) ** 2
        + z**2 * x**2 * (z - x) ** 2
        + x * y * z * (x - y) * (y - z) * (z - x)
    )


REZNICK_ZEROS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
REZNICK_EXTRA = (-2, 5, -1)
REZNICK_RESIDUAL = (Q(3), Q(10), Q(1))
REZNICK_U = [84, -1260, -36, -90, 63, 35, -60, 3, 1]
REZNICK_PENCIL = [
    -_x**2 * _y - (_x**2 * _z).scale(35) + _y**2 * _x + (_z**2 * _x).scale(35),
    (_x**2 * _z).scale(15) - _y**2 * _z - (_z**2 * _x).scale(15) + _z**2 * _y,
]
REZNICK_A9_N1E9 = Q(-500000000, 4500806423)

CUBE_VERTICES = [(a, b, c, 1) for a in (1, -1) for b in (1, -1) for c in (1, -1)]


def choi_lam() -> Form:
    x, y, z, w = (Form.variable(4, i) for i in range(4))
    return x**2 * y**2 + y**2 * z**2 + z**2 * x**2 + w**4 - (x * y * z * w).scale(4)


CHOI_LAM_ZEROS = [(1, 1, 1, 1), (1, -1, -1, 1), (-1, 1, -1, 1), (-1, -1, 1, 1), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)]


def sphere_cube() -> Form:
    """(x^2 + y^2 + z^2)^3, an interior point of the SOS cone."""
    return (_x**2 + _y**2 + _z**2) ** 3
