"""Point configurations: genericity, forms through points, the residual
intersection point, and Cayley-Bacharach coefficients.

Ternary case: eight points determine a pencil of cubics whose ninth base point
is the residual point.  Quaternary case: seven points determine a net of
quadrics with an eighth base point.  Points are affine representatives with
rational coordinates; results that depend on the representative (the
coefficients ``u``) use the representatives exactly as given.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exactq import (
    det,
    format_rat,
    integer_rank,
    integer_row,
    inverse,
    matvec,
    nullspace,
    parse_rat,
    primitive_integer_vector,
    rank,
    rat,
    rref,
)
from .forms import (
    Form,
    ParseError,
    Poly,
    UniPoly,
    _header,
    bivariate_to_y_coeffs,
    content_lines,
    deflate,
    dehomogenize,
    gcd_poly,
    linear_change,
    monomial_basis,
    resultant_poly,
    resultant_y,
    veronese,
)

log = logging.getLogger(__name__)

Point = tuple[Fraction, ...]

DEFAULT_RETRY_BUDGET = 32


class DegenerateConfiguration(ValueError):
    """The points do not form a usable Cayley-Bacharach configuration."""


def pencil_degree(nvars: int) -> int:
    """Degree of the forms cut out by the configuration: cubics in 3 variables, quadrics in 4."""
    if nvars == 3:
        return 3
    if nvars == 4:
        return 2
    raise ValueError("only 3 or 4 variables are supported")


def full_size(nvars: int) -> int:
    return 9 if nvars == 3 else 8


def as_point(v: Sequence) -> Point:
    return tuple(rat(x) for x in v)


def projectively_equal(v: Sequence, w: Sequence) -> bool:
    return rank([list(v), list(w)]) < 2


def canonical_representative(v: Sequence) -> Point:
    """Coprime integer coordinates with the first nonzero coordinate positive."""
    ints = primitive_integer_vector([rat(x) for x in v])
    if not any(ints):
        raise ValueError("the zero vector is not a projective point")
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


@dataclass(frozen=True)
class PointConfig:
    """Ordered affine representatives; the first ``zero_count`` are zeros of the target form.

    ``zero_count`` may be 0 for configurations that have no target form.
    """

    nvars: int
    points: tuple[Point, ...]
    zero_count: int = 0

    def __post_init__(self):
        pts = tuple(as_point(v) for v in self.points)
        object.__setattr__(self, "points", pts)
        if self.nvars not in (3, 4):
            raise ValueError("nvars must be 3 or 4")
        for v in pts:
            if len(v) != self.nvars:
                raise ValueError(f"point {v} does not have {self.nvars} coordinates")
            if not any(v):
                raise ValueError("the zero vector is not a projective point")
        for i, j in combinations(range(len(pts)), 2):
            if projectively_equal(pts[i], pts[j]):
                raise DegenerateConfiguration(f"points {i + 1} and {j + 1} coincide projectively")
        if not 0 <= self.zero_count <= len(pts):
            raise ValueError("zero_count out of range")

    def __len__(self):
        return len(self.points)

    def with_point(self, v: Sequence) -> "PointConfig":
        return PointConfig(self.nvars, self.points + (as_point(v),), self.zero_count)


@dataclass(frozen=True)
class Violation:
    kind: str  # "line", "quadric" or "plane"
    witness: tuple[int, ...]  # 0-based indices of the offending points

    def __str__(self):
        where = {"line": "on a line", "quadric": "on a conic", "plane": "on a plane"}[self.kind]
        return f"points {', '.join(str(i + 1) for i in self.witness)} lie {where}"


def genericity_check(points: Sequence[Sequence]) -> Violation | None:
    """First violation of the genericity condition, or ``None``.

    Three variables: no four points on a line, no seven on a conic.
    Four variables: no five points on a plane.
    """
    pts = [as_point(v) for v in points]
    if not pts:
        return None
    nvars = len(pts[0])
    # rank is unchanged by scaling rows, so convert each point to integers once
    coords = [integer_row(v) for v in pts]
    if nvars == 3:
        for idx in combinations(range(len(pts)), 4):
            if integer_rank([coords[i] for i in idx]) < 3:
                return Violation("line", idx)
        ver = [integer_row(veronese(v, 2)) for v in pts]
        for idx in combinations(range(len(pts)), 7):
            if integer_rank([ver[i] for i in idx]) < 6:
                return Violation("quadric", idx)
        return None
    if nvars == 4:
        for idx in combinations(range(len(pts)), 5):
            if integer_rank([coords[i] for i in idx]) < 4:
                return Violation("plane", idx)
        return None
    raise ValueError("only 3 or 4 variables are supported")


def evaluation_matrix(points: Sequence[Sequence], degree: int) -> list[list[Fraction]]:
    """Rows are points, columns are the degree-``degree`` monomials."""
    return [veronese(v, degree) for v in points]


def vanishing_space(points: Sequence[Sequence], degree: int | None = None) -> list[Form]:
    """Reduced echelon basis of all forms of ``degree`` vanishing at every point."""
    pts = [as_point(v) for v in points]
    nvars = len(pts[0])
    degree = pencil_degree(nvars) if degree is None else degree
    _, basis = nullspace(evaluation_matrix(pts, degree))
    if not basis:
        return []
    red, pivots = rref(basis)
    return [Form.from_vector(nvars, degree, row) for row in red[: len(pivots)]]


def in_span(f: Form, basis: Sequence[Form]) -> bool:
    rows = [b.to_vector() for b in basis]
    return rank(rows + [f.to_vector()]) == rank(rows) if rows else f.is_zero()


# -- residual point -------------------------------------------------------------


def _random_change(rng: random.Random, n: int) -> list[list[Fraction]]:
    while True:
        a = [[Fraction(rng.randint(-9, 9)) for _ in range(n)] for _ in range(n)]
        if det(a) != 0:
            return a


def _chart(points: Sequence[Point], ainv) -> list[tuple[Fraction, ...]] | None:
    out = []
    for v in points:
        w = matvec(ainv, v)
        if w[-1] == 0:
            return None
        out.append(tuple(x / w[-1] for x in w[:-1]))
    xs = [c[0] for c in out]
    if len(set(xs)) != len(xs):
        return None
    return out


def _single_root(p: UniPoly) -> Fraction | None:
    if p.degree != 1:
        return None
    return -p.coeffs[0] / p.coeffs[1]


def _common_root(polys: Sequence[UniPoly]) -> Fraction | None:
    g = UniPoly()
    for p in polys:
        g = gcd_poly(g, p)
    return _single_root(g)


def _deflate_known(res: UniPoly, xs: Sequence[Fraction]) -> UniPoly | None:
    for x in xs:
        if res(x) != 0:
            return None
        res = deflate(res, x)
    return res


def _residual_ternary(pencil: Sequence[Form], known: Sequence[Point], a, rng: random.Random) -> Point | None:
    chart = _chart(known, inverse(a))
    if chart is None:
        return None
    g = [dehomogenize(linear_change(f, a)) for f in pencil]
    if any(gi.degree_in(1) != 3 for gi in g):
        return None
    res = resultant_y(bivariate_to_y_coeffs(g[0]), bivariate_to_y_coeffs(g[1]))
    # degree below 9 means an intersection at infinity in this chart
    if res.is_zero() or res.degree != 9:
        return None
    xs = [c[0] for c in chart]
    rest = _deflate_known(res, xs)
    if rest is None:
        return None
    # a root at a known x is either that known point again (a tangency, which the
    # caller reports) or an x-collision, which leaves a non-linear gcd in y below
    x0 = _single_root(rest)
    if x0 is None:
        return None
    y0 = _common_root([gi.substitute(0, x0).to_unipoly() for gi in g])
    if y0 is None or any(gi((x0, y0)) != 0 for gi in g):
        return None
    return tuple(matvec(a, [x0, y0, Fraction(1)]))


def _residual_quaternary(net: Sequence[Form], known: Sequence[Point], a, rng: random.Random) -> Point | None:
    chart = _chart(known, inverse(a))
    if chart is None:
        return None
    # generic members of the net; basis quadrics can share a line pairwise
    members = []
    for _ in range(3):
        c = [rng.randint(-9, 9) for _ in net]
        members.append(sum((f.scale(ci) for f, ci in zip(net[1:], c[1:])), net[0].scale(c[0])))
    g = [dehomogenize(linear_change(f, a)) for f in members]
    if any(gi.degree_in(2) != 2 for gi in g):
        return None
    # eliminate z pairwise, then y; spurious roots differ between the pairs
    pair = {}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        r = resultant_poly(g[i], g[j], 2)
        if r.is_zero() or r.degree_in(1) < 1:
            return None
        pair[i, j] = r
    rs = list(pair.values())
    common = UniPoly()
    for r1, r2 in ((rs[0], rs[1]), (rs[0], rs[2]), (rs[1], rs[2])):
        u = resultant_y(bivariate_to_y_coeffs(r1), bivariate_to_y_coeffs(r2))
        if u.is_zero():
            return None
        common = gcd_poly(common, u)
    xs = [c[0] for c in chart]
    rest = _deflate_known(common, xs)
    if rest is None:
        return None
    x0 = _single_root(rest)
    if x0 is None:
        return None
    y0 = _common_root([r.substitute(0, x0).to_unipoly() for r in rs])
    if y0 is None:
        return None
    z0 = _common_root([gi.substitute(0, x0).substitute(0, y0).to_unipoly() for gi in g])
    if z0 is None:
        return None
    # iterated resultants can produce spurious candidates: back-substitute
    if any(f((x0, y0, z0, Fraction(1))) != 0 for f in (linear_change(q, a) for q in net)):
        return None
    return tuple(matvec(a, [x0, y0, z0, Fraction(1)]))


def residual_point(
    points: Sequence[Sequence],
    seed: int = 0,
    budget: int = DEFAULT_RETRY_BUDGET,
) -> Point:
    """The remaining base point of the forms through eight (ternary) or seven (quaternary) points.

    Each attempt moves to a seeded random coordinate system, eliminates with
    resultants, strips the known roots and reads off the last one.  The result
    is returned in canonical representative form.
    """
    known = [as_point(v) for v in points]
    nvars = len(known[0])
    if len(known) != full_size(nvars) - 1:
        raise ValueError(f"need {full_size(nvars) - 1} points in {nvars} variables, got {len(known)}")
    violation = genericity_check(known)
    if violation is not None:
        raise DegenerateConfiguration(f"non-generic configuration: {violation}")
    space = vanishing_space(known)
    expected = 2 if nvars == 3 else 3
    if len(space) != expected:
        raise DegenerateConfiguration(
            f"non-generic configuration: forms through the points span dimension {len(space)}, expected {expected}"
        )
    rng = random.Random(seed)
    solve_in_chart = _residual_ternary if nvars == 3 else _residual_quaternary
    for attempt in range(budget):
        a = _random_change(rng, nvars)
        found = solve_in_chart(space, known, a, rng)
        if found is None:
            log.debug("residual point: chart %d rejected", attempt)
            continue
        if any(projectively_equal(found, v) for v in known):
            raise DegenerateConfiguration("degenerate intersection: residual point coincides with an input point")
        return canonical_representative(found)
    raise DegenerateConfiguration(
        f"degenerate intersection: no simple rational residual point found in {budget} coordinate changes"
    )


# -- Cayley-Bacharach coefficients ------------------------------------------------


def cb_coefficients(points: Sequence[Sequence]) -> list[Fraction]:
    """Canonical coefficients ``u`` with sum_j u_j f(v_j) = 0 for every form f of the pencil degree.

    Normalised to coprime integers with a positive last entry.
    """
    pts = [as_point(v) for v in points]
    nvars = len(pts[0])
    if len(pts) != full_size(nvars):
        raise ValueError(f"need {full_size(nvars)} points in {nvars} variables")
    columns = evaluation_matrix(pts, pencil_degree(nvars))
    monomial_rows = [list(r) for r in zip(*columns)]
    _, basis = nullspace(monomial_rows)
    if len(basis) != 1:
        raise DegenerateConfiguration(
            f"not a Cayley-Bacharach configuration: relation space has dimension {len(basis)}"
        )
    u = primitive_integer_vector(basis[0])
    if u[-1] < 0:
        u = [-x for x in u]
    if any(x == 0 for x in u):
        raise DegenerateConfiguration("transversality violated: a Cayley-Bacharach coefficient is zero")
    return [Fraction(x) for x in u]


def cb_residuals(points: Sequence[Sequence], u: Sequence[Fraction]) -> list[Fraction]:
    """sum_j u_j m(v_j) for every monomial m of the pencil degree; all zero for a valid u."""
    pts = [as_point(v) for v in points]
    d = pencil_degree(len(pts[0]))
    ver = evaluation_matrix(pts, d)
    return [sum((uj * row[k] for uj, row in zip(u, ver)), Fraction(0)) for k in range(len(ver[0]))]


@dataclass(frozen=True)
class CBSystem:
    """A full configuration with its pencil (or net) and Cayley-Bacharach coefficients."""

    config: PointConfig
    pencil: tuple[Form, ...]
    residual_index: int
    u: tuple[Fraction, ...]
    seed: int = field(default=0, compare=False)

    @property
    def points(self) -> tuple[Point, ...]:
        return self.config.points

    @property
    def nvars(self) -> int:
        return self.config.nvars


def system_from_points(config: PointConfig, seed: int = 0) -> CBSystem:
    """Build the system for an already complete configuration (residual point last)."""
    if len(config) != full_size(config.nvars):
        raise ValueError(f"need {full_size(config.nvars)} points")
    violation = genericity_check(config.points)
    if violation is not None:
        raise DegenerateConfiguration(f"non-generic configuration: {violation}")
    pencil = vanishing_space(config.points)
    u = cb_coefficients(config.points)
    return CBSystem(config, tuple(pencil), len(config) - 1, tuple(u), seed)


def complete_system(config: PointConfig, seed: int = 0, budget: int = DEFAULT_RETRY_BUDGET) -> CBSystem:
    """Append the residual point to an eight (seven) point configuration and build the system."""
    v = residual_point(config.points, seed=seed, budget=budget)
    return system_from_points(config.with_point(v), seed=seed)


# -- text format --------------------------------------------------------------------


def format_points(points: Sequence[Sequence], nvars: int | None = None) -> str:
    pts = [as_point(v) for v in points]
    nvars = nvars if nvars is not None else len(pts[0])
    lines = [f"points nvars={nvars}"]
    lines += [" ".join(format_rat(x) for x in v) for v in pts]
    return "\n".join(lines) + "\n"


def parse_points(text: str) -> tuple[int, list[Point]]:
    lines = content_lines(text)
    if not lines:
        raise ParseError("empty points file")
    head = _header(lines[0], "points")
    if "nvars" not in head:
        raise ParseError("points header misses nvars")
    nvars = head["nvars"]
    if nvars not in (3, 4):
        raise ParseError("nvars must be 3 or 4")
    pts = []
    for line in lines[1:]:
        try:
            v = tuple(parse_rat(t) for t in line.split())
        except ValueError as exc:
            raise ParseError(f"bad point line {line!r}: {exc}") from None
        if len(v) != nvars:
            raise ParseError(f"point {line!r} does not have {nvars} coordinates")
        pts.append(v)
    return nvars, pts
