"""Homogeneous forms over Q, univariate polynomials, and Sylvester resultants.

Monomials are ordered graded-lexicographically everywhere: for a fixed degree
this is plain lexicographic order on exponent tuples, largest first, so the
cubic basis in (x, y, z) starts x^3, x^2 y, x^2 z, x y^2, ...
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, gcd, isqrt, lcm
from typing import Iterable, Mapping, Sequence

from .exactq import RatMatrix, format_rat, inverse, parse_rat, rat

VARIABLE_NAMES = {3: "xyz", 4: "xyzw"}


class ParseError(ValueError):
    """Malformed text in one of the exchange formats."""


@lru_cache(maxsize=None)
def monomial_basis(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of all degree-``degree`` monomials in graded-lex order."""

    def gen(n, d):
        if n == 1:
            yield (d,)
            return
        for first in range(d, -1, -1):
            for rest in gen(n - 1, d - first):
                yield (first,) + rest

    basis = tuple(gen(nvars, degree))
    assert len(basis) == comb(nvars + degree - 1, degree)
    return basis


@lru_cache(maxsize=None)
def _basis_index(nvars: int, degree: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(monomial_basis(nvars, degree))}


def monomial_value(exps: Sequence[int], v: Sequence[Fraction]) -> Fraction:
    out = Fraction(1)
    for x, e in zip(v, exps):
        if e:
            out *= x**e
    return out


def veronese(v: Sequence, degree: int) -> list[Fraction]:
    """All degree-``degree`` monomials evaluated at ``v``, in basis order."""
    v = [rat(x) for x in v]
    n = len(v)
    powers = [[Fraction(1)] for _ in range(n)]
    for i in range(n):
        for _ in range(degree):
            powers[i].append(powers[i][-1] * v[i])
    out = []
    for exps in monomial_basis(n, degree):
        val = Fraction(1)
        for i, e in enumerate(exps):
            if e:
                val *= powers[i][e]
        out.append(val)
    return out


def _check_point(nvars: int, v: Sequence) -> list[Fraction]:
    if len(v) != nvars:
        raise ValueError(f"point has {len(v)} coordinates, form has {nvars} variables")
    return [rat(x) for x in v]


@dataclass(frozen=True)
class Form:
    """A homogeneous polynomial: exponent tuple -> nonzero rational coefficient."""

    nvars: int
    degree: int
    terms: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exps, c in self.terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.nvars or any(e < 0 for e in exps) or sum(exps) != self.degree:
                raise ValueError(f"exponent {exps} does not fit nvars={self.nvars} degree={self.degree}")
            c = rat(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})

    # construction -------------------------------------------------------

    @classmethod
    def from_vector(cls, nvars: int, degree: int, coeffs: Sequence) -> "Form":
        basis = monomial_basis(nvars, degree)
        if len(coeffs) != len(basis):
            raise ValueError("coefficient vector has the wrong length")
        return cls(nvars, degree, {e: rat(c) for e, c in zip(basis, coeffs)})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Form":
        return cls(nvars, 1, {tuple(int(j == i) for j in range(nvars)): Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Form":
        n = len(coeffs)
        return cls(n, 1, {tuple(int(j == i) for j in range(n)): rat(c) for i, c in enumerate(coeffs)})

    @classmethod
    def zero(cls, nvars: int, degree: int) -> "Form":
        return cls(nvars, degree, {})

    # arithmetic ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def to_vector(self) -> list[Fraction]:
        return [self.terms.get(e, Fraction(0)) for e in monomial_basis(self.nvars, self.degree)]

    def _same_space(self, other: "Form"):
        if (self.nvars, self.degree) != (other.nvars, other.degree):
            raise ValueError("forms live in different spaces")

    def __add__(self, other: "Form") -> "Form":
        self._same_space(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Form(self.nvars, self.degree, terms)

    def __neg__(self) -> "Form":
        return Form(self.nvars, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        c = rat(c)
        return Form(self.nvars, self.degree, {e: c * x for e, x in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Form):
            return self.scale(other)
        if self.nvars != other.nvars:
            raise ValueError("forms in different numbers of variables")
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Form(self.nvars, self.degree + other.degree, terms)

    __rmul__ = scale

    def __pow__(self, k: int) -> "Form":
        out = Form(self.nvars, 0, {(0,) * self.nvars: Fraction(1)})
        for _ in range(k):
            out = out * self
        return out

    # evaluation ---------------------------------------------------------

    def __call__(self, v: Sequence) -> Fraction:
        return evaluate(self, v)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = VARIABLE_NAMES.get(self.nvars) or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for e in monomial_basis(self.nvars, self.degree):
            c = self.terms.get(e)
            if c is None:
                continue
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            coef = str(c)
            parts.append(f"{coef}*{mono}" if mono else coef)
        return " + ".join(parts).replace("+ -", "- ")


def evaluate(f: Form, v: Sequence) -> Fraction:
    """Exact value of ``f`` at the affine representative ``v``."""
    v = _check_point(f.nvars, v)
    total = Fraction(0)
    for exps, c in f.terms.items():
        total += c * monomial_value(exps, v)
    return total


def linear_change(f: Form, a: Sequence[Sequence]) -> Form:
    """The form ``x -> f(A x)``."""
    n = f.nvars
    if len(a) != n or any(len(row) != n for row in a):
        raise ValueError("coordinate change must be square of size nvars")
    inverse(a)  # raises on singular A
    images = [Form.linear(row) for row in a]
    out = Form.zero(n, f.degree)
    cache: dict[tuple[int, int], Form] = {}

    def power(i: int, k: int) -> Form:
        if (i, k) not in cache:
            cache[(i, k)] = images[i] ** k
        return cache[(i, k)]

    for exps, c in f.terms.items():
        term = Form(n, 0, {(0,) * n: c})
        for i, k in enumerate(exps):
            if k:
                term = term * power(i, k)
        out = out + term
    return out


# -- text format --------------------------------------------------------------


def format_form(f: Form) -> str:
    lines = [f"form nvars={f.nvars} degree={f.degree}"]
    for e in monomial_basis(f.nvars, f.degree):
        c = f.terms.get(e)
        if c is not None:
            lines.append(" ".join(map(str, e)) + " : " + format_rat(c))
    return "\n".join(lines) + "\n"


def _header(line: str, keyword: str) -> dict[str, int]:
    parts = line.split()
    if not parts or parts[0] != keyword:
        raise ParseError(f"expected a '{keyword} ...' header, got {line!r}")
    out = {}
    for p in parts[1:]:
        key, sep, val = p.partition("=")
        if not sep:
            raise ParseError(f"bad header field {p!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise ParseError(f"bad header field {p!r}") from None
    return out


def content_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def parse_form(text: str) -> Form:
    lines = content_lines(text)
    if not lines:
        raise ParseError("empty form file")
    head = _header(lines[0], "form")
    try:
        nvars, degree = head["nvars"], head["degree"]
    except KeyError as exc:
        raise ParseError(f"form header misses {exc.args[0]}") from None
    if nvars not in (3, 4):
        raise ParseError("nvars must be 3 or 4")
    terms: dict[tuple[int, ...], Fraction] = {}
    for line in lines[1:]:
        left, sep, right = line.partition(":")
        if not sep:
            raise ParseError(f"term line without ':' {line!r}")
        try:
            exps = tuple(int(t) for t in left.split())
            coef = parse_rat(right)
        except ValueError as exc:
            raise ParseError(f"bad term line {line!r}: {exc}") from None
        if len(exps) != nvars or sum(exps) != degree or min(exps) < 0:
            raise ParseError(f"exponents {exps} do not match nvars={nvars} degree={degree}")
        if exps in terms:
            raise ParseError(f"duplicate monomial {exps}")
        terms[exps] = coef
    return Form(nvars, degree, terms)


# -- univariate polynomials ----------------------------------------------------


class UniPoly:
    """Dense univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [rat(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = c

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __add__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly([-x for x in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return (-self) + other

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = rat(other)
            return UniPoly([other * x for x in self.coeffs])
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        out = UniPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lc = other.lc
        d = other.degree
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k] / lc
            if c:
                q[k - d] = c
                for j, y in enumerate(other.coeffs):
                    rem[k - d + j] -= c * y
        return UniPoly(q), UniPoly(rem[:d])

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __call__(self, x):
        x = rat(x)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)


def gcd_poly(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic greatest common divisor (zero if both inputs are zero)."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def deflate(f: UniPoly, root) -> UniPoly:
    """Exact quotient of ``f`` by ``(x - root)``; ``root`` must be a root."""
    root = rat(root)
    if f.is_zero():
        raise ValueError("cannot deflate the zero polynomial")
    if f(root) != 0:
        raise ValueError(f"{root} is not a root")
    # synthetic division
    out = []
    acc = Fraction(0)
    for c in reversed(f.coeffs[1:]):
        acc = acc * root + c
        out.append(acc)
    return UniPoly(reversed(out))


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def rational_roots(f: UniPoly) -> list[Fraction]:
    """All rational roots of ``f`` with multiplicity, in increasing order.

    Candidates p/q come from the divisors of the trailing and leading
    coefficients of the integer-cleared polynomial, so this is meant for
    polynomials with modest coefficients.
    """
    if f.is_zero():
        raise ValueError("the zero polynomial has every rational as a root")
    roots: list[Fraction] = []
    g = f
    while g.coeffs and g.coeffs[0] == 0:
        roots.append(Fraction(0))
        g = UniPoly(g.coeffs[1:])
    if g.degree >= 1:
        den = lcm(*(c.denominator for c in g.coeffs))
        ints = [int(c * den) for c in g.coeffs]
        cands = set()
        for p in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                cands.add(Fraction(p, q))
                cands.add(Fraction(-p, q))
        for r in sorted(cands):
            while g.degree >= 1 and g(r) == 0:
                roots.append(r)
                g = deflate(g, r)
    return sorted(roots)


# -- sparse multivariate polynomials (non-homogeneous, for elimination) ----------


class Poly:
    """Sparse polynomial in ``nvars`` variables over Q.

    Only what elimination needs: ring arithmetic, exact division and
    substitution.  Exponent tuples are compared lexicographically.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.nvars = nvars
        self.terms = {e: rat(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: rat(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {{{', '.join(f'{e}: {c}' for e, c in sorted(self.terms.items()))}}})"

    def _coerce(self, other) -> "Poly":
        return other if isinstance(other, Poly) else Poly.constant(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other: "Poly") -> "Poly":
        """Quotient of an exact division; raises if ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        le, lc = other.leading()
        rem = Poly(self.nvars, self.terms)
        quot: dict[tuple[int, ...], Fraction] = {}
        while not rem.is_zero():
            e, c = rem.leading()
            shift = tuple(a - b for a, b in zip(e, le))
            if min(shift) < 0:
                raise ArithmeticError("inexact polynomial division")
            q = c / lc
            quot[shift] = q
            rem = rem - Poly(self.nvars, {shift: q}) * other
        return Poly(self.nvars, quot)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def coefficients_in(self, i: int) -> list["Poly"]:
        """Coefficient list w.r.t. variable ``i`` (lowest first); the variable drops out."""
        d = self.degree_in(i)
        out = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            out[e[i]][e[:i] + e[i + 1 :]] = c
        return [Poly(self.nvars - 1, t) for t in out]

    def substitute(self, i: int, value) -> "Poly":
        """Set variable ``i`` to a rational value; the variable drops out."""
        value = rat(value)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e, c in self.terms.items():
            key = e[:i] + e[i + 1 :]
            terms[key] = terms.get(key, Fraction(0)) + c * value ** e[i]
        return Poly(self.nvars - 1, terms)

    def to_unipoly(self) -> UniPoly:
        if self.nvars != 1:
            raise ValueError("only a one-variable Poly converts to UniPoly")
        d = self.degree_in(0)
        c = [Fraction(0)] * (d + 1)
        for (k,), v in self.terms.items():
            c[k] = v
        return UniPoly(c)

    def __call__(self, v: Sequence) -> Fraction:
        out = Fraction(0)
        for e, c in self.terms.items():
            out += c * monomial_value(e, [rat(x) for x in v])
        return out


def dehomogenize(f: Form, chart: int | None = None) -> Poly:
    """Set the ``chart`` variable (default: the last one) to 1."""
    chart = f.nvars - 1 if chart is None else chart
    terms: dict[tuple[int, ...], Fraction] = {}
    for e, c in f.terms.items():
        key = e[:chart] + e[chart + 1 :]
        terms[key] = terms.get(key, Fraction(0)) + c
    return Poly(f.nvars - 1, terms)


def _is_zero(x) -> bool:
    return x.is_zero() if hasattr(x, "is_zero") else x == 0


def _exact_div(a, b):
    if hasattr(a, "exact_div"):
        return a.exact_div(b)
    q = Fraction(a) / Fraction(b)
    return q


def sylvester_matrix(f: Sequence, g: Sequence, zero) -> list[list]:
    """Sylvester matrix of two coefficient lists (lowest degree first)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        rows.append([zero] * i + fr + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gr + [zero] * (size - n - 1 - i))
    return rows


def bareiss_det(rows: list[list], zero, one):
    """Determinant over an integral domain whose elements support exact division."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if _is_zero(a[k][k]):
            swap = next((i for i in range(k + 1, n) if not _is_zero(a[i][k])), None)
            if swap is None:
                return zero
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = _exact_div(p * a[i][j] - aik * a[k][j], prev)
            a[i][k] = zero
        prev = p
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def _trim(coeffs: Sequence) -> list:
    c = list(coeffs)
    while c and _is_zero(c[-1]):
        c.pop()
    return c


def resultant(f: Sequence, g: Sequence, zero, one):
    """Resultant of two polynomials given as coefficient lists over a domain."""
    f, g = _trim(f), _trim(g)
    if not f or not g:
        raise ValueError("resultant of a zero polynomial")
    if len(f) == 1 and len(g) == 1:
        return one
    return bareiss_det(sylvester_matrix(f, g, zero), zero, one)


def resultant_y(f: Sequence[UniPoly], g: Sequence[UniPoly]) -> UniPoly:
    """Eliminate y from f(x, y), g(x, y) given as y-coefficient lists of UniPolys in x."""
    return resultant([UniPoly(c.coeffs) for c in f], [UniPoly(c.coeffs) for c in g], UniPoly(), UniPoly([1]))


def bivariate_to_y_coeffs(p: Poly) -> list[UniPoly]:
    """View a Poly in (x, y) as a list of y-coefficients, each a UniPoly in x."""
    if p.nvars != 2:
        raise ValueError("expected a polynomial in two variables")
    return [c.to_unipoly() for c in p.coefficients_in(1)]


def resultant_poly(f: Poly, g: Poly, var: int) -> Poly:
    """Eliminate variable ``var`` from two Polys; result has one variable fewer."""
    n = f.nvars - 1
    return resultant(f.coefficients_in(var), g.coefficients_in(var), Poly(n), Poly.constant(n, 1))
