"""Separating functionals l_a(f) = sum_j a_j f(v_j) for nonnegative forms that are not SOS.

A certificate is a Cayley-Bacharach configuration together with weights ``a``:
all positive except one.  The functional is nonnegative on every square exactly
when its moment matrix sum_j a_j w_j w_j^T (w_j the Veronese vector of v_j) is
positive semidefinite, and it separates ``p`` when l_a(p) < 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from . import __version__
from .configuration import (
    CBSystem,
    DegenerateConfiguration,
    PointConfig,
    as_point,
    cb_coefficients,
    cb_residuals,
    complete_system,
    full_size,
    pencil_degree,
    residual_point,
    vanishing_space,
)
from .exactq import format_rat, parse_rat, psd_rank, rat
from .forms import Form, ParseError, veronese


class ZeroSetMismatch(ValueError):
    """The target form does not vanish exactly on the declared zeros."""


class ConditionFailed(ValueError):
    """No choice of negative index satisfies the separation inequality."""

    def __init__(self, message: str, reports: Sequence["ConditionReport"] = ()):
        super().__init__(message)
        self.reports = list(reports)


@dataclass(frozen=True)
class ConditionReport:
    neg_index: int  # 0-based
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs

    def __str__(self):
        mark = "<" if self.holds else ">="
        return (
            f"neg_index={self.neg_index + 1}: lhs={format_rat(self.lhs)} {mark} rhs={format_rat(self.rhs)}"
            f"  ({float(self.lhs):.10g} vs {float(self.rhs):.10g}) -> {'holds' if self.holds else 'fails'}"
        )


@dataclass(frozen=True)
class Certificate:
    system: CBSystem
    a: tuple[Fraction, ...]
    neg_index: int  # 0-based
    l_value: Fraction
    target: Form | None = field(default=None, compare=False)
    N: Fraction | None = None
    threshold: Fraction | None = None

    @property
    def points(self):
        return self.system.points

    @property
    def u(self):
        return self.system.u

    @property
    def zero_count(self) -> int:
        return self.system.config.zero_count


def check_zero_set(p: Form, points: Sequence[Sequence], zero_count: int) -> list[Fraction]:
    """Values of p at the points, after checking zeros come first and the rest are positive."""
    values = [p(v) for v in points]
    for j, val in enumerate(values):
        if j < zero_count and val != 0:
            raise ZeroSetMismatch(f"zero-set mismatch: p(v_{j + 1}) = {val} but v_{j + 1} is declared a zero")
        if j >= zero_count and val <= 0:
            raise ZeroSetMismatch(f"zero-set mismatch: p(v_{j + 1}) = {val} but v_{j + 1} is declared positive")
    return values


def separation_condition(p: Form, system: CBSystem, neg_index: int) -> ConditionReport:
    """Compare (sum u_j^2)(sum p(v_j)) over the positive points other than neg_index with u_neg^2 p(v_neg)."""
    k = system.config.zero_count
    values = check_zero_set(p, system.points, k)
    if not k <= neg_index < len(values):
        raise ValueError(f"neg_index must be a non-zero point (index > {k})")
    rest = [j for j in range(k, len(values)) if j != neg_index]
    s = sum((system.u[j] ** 2 for j in rest), Fraction(0))
    pv = sum((values[j] for j in rest), Fraction(0))
    return ConditionReport(neg_index, s * pv, system.u[neg_index] ** 2 * values[neg_index])


def negative_weight(u: Sequence[Fraction], a: Sequence[Fraction], neg_index: int) -> Fraction:
    """The weight at neg_index that puts sum_j u_j^2 / a_j at zero."""
    denom = sum((u[j] ** 2 / a[j] for j in range(len(u)) if j != neg_index), Fraction(0))
    return -u[neg_index] ** 2 / denom


def threshold(p: Form, system: CBSystem, neg_index: int) -> Fraction | None:
    """Infimum N* of weights on the zeros that make l_a(p) negative; None if every N > 0 works."""
    report = separation_condition(p, system, neg_index)
    if not report.holds:
        raise ConditionFailed(f"separation condition fails: {report}", [report])
    k = system.config.zero_count
    rest = [j for j in range(k, len(system.points)) if j != neg_index]
    pv = sum((p(system.points[j]) for j in rest), Fraction(0))
    if pv == 0:
        return None
    s_zero = sum((system.u[j] ** 2 for j in range(k)), Fraction(0))
    return s_zero * pv / (report.rhs - report.lhs)


def build_a(p: Form, system: CBSystem, neg_index: int | None = None, N=None) -> Certificate:
    """Weights N on the zeros, 1 on the other positive points, and the balancing negative weight."""
    if neg_index is None:
        neg_index = system.residual_index
    n_star = threshold(p, system, neg_index)
    if N is None:
        N = Fraction(1) if n_star is None else 2 * n_star
    N = rat(N)
    if N <= 0 or (n_star is not None and N <= n_star):
        bound = "0" if n_star is None else format_rat(n_star)
        raise ValueError(f"N = {format_rat(N)} is too small; it must exceed {bound}")
    k = system.config.zero_count
    a = [N if j < k else Fraction(1) for j in range(len(system.points))]
    a[neg_index] = negative_weight(system.u, a, neg_index)
    l_value = sum((aj * p(v) for aj, v in zip(a, system.points)), Fraction(0))
    assert l_value < 0
    return Certificate(system, tuple(a), neg_index, l_value, p, N, n_star)


def neg_index_candidates(system: CBSystem) -> list[int]:
    """The residual point first, then every other non-zero point in order."""
    k = system.config.zero_count
    r = system.residual_index
    return [r] + [j for j in range(k, len(system.points)) if j != r]


def certify(
    p: Form,
    config: PointConfig,
    neg_index: int | None = None,
    N=None,
    seed: int = 0,
) -> tuple[Certificate, list[ConditionReport]]:
    """Complete the configuration, then try negative indices until the condition holds.

    ``config`` holds the zeros of ``p`` followed by the extra points (eight or
    seven in total).  Raises :class:`ConditionFailed` with every report when no
    index works.
    """
    if p.nvars != config.nvars or p.degree != 2 * pencil_degree(config.nvars):
        raise ValueError("target must be a ternary sextic or a quaternary quartic matching the points")
    if config.zero_count < 1:
        raise ValueError("at least one zero of the target is required")
    check_zero_set(p, config.points, config.zero_count)
    system = complete_system(config, seed=seed)
    candidates = [neg_index] if neg_index is not None else neg_index_candidates(system)
    reports = []
    for j in candidates:
        report = separation_condition(p, system, j)
        reports.append(report)
        if report.holds:
            return build_a(p, system, j, N), reports
    raise ConditionFailed("separation condition fails for every negative index", reports)


def moment_matrix(points: Sequence[Sequence], a: Sequence) -> list[list[Fraction]]:
    """sum_j a_j w_j w_j^T over the monomials of the pencil degree."""
    pts = [as_point(v) for v in points]
    d = pencil_degree(len(pts[0]))
    ws = [veronese(v, d) for v in pts]
    size = len(ws[0])
    g = [[Fraction(0)] * size for _ in range(size)]
    for aj, w in zip(a, ws):
        aj = rat(aj)
        if not aj:
            continue
        for r in range(size):
            if w[r]:
                f = aj * w[r]
                row = g[r]
                for c in range(size):
                    row[c] += f * w[c]
    return g


def expected_rank(nvars: int) -> int:
    """Rank of the moment matrix of an extreme separating functional."""
    return full_size(nvars) - 2


@dataclass
class VerificationReport:
    is_psd: bool
    rank: int
    expected_rank: int
    l_value: Fraction
    l_value_matches: bool
    cb_identity: Fraction | None  # sum u_j^2 / a_j, None if some a_j is zero
    u_annihilates: bool
    zero_set_ok: bool
    zero_set_message: str = ""

    @property
    def valid(self) -> bool:
        return self.is_psd and self.l_value < 0

    def lines(self) -> list[str]:
        yes = {True: "yes", False: "NO"}
        out = [
            f"moment matrix PSD      : {yes[self.is_psd]}",
            f"moment matrix rank     : {self.rank} (extreme rays have rank {self.expected_rank})",
            f"l_a(p)                 : {format_rat(self.l_value)} ({float(self.l_value):.10g})"
            + ("" if self.l_value_matches else "  [differs from the stored l_value]"),
            "sum u_j^2/a_j          : "
            + ("undefined (zero weight)" if self.cb_identity is None else format_rat(self.cb_identity)),
            f"u annihilates forms    : {yes[self.u_annihilates]}",
            f"zero set consistent    : {yes[self.zero_set_ok]}"
            + (f" ({self.zero_set_message})" if self.zero_set_message else ""),
            f"verdict                : {'VALID' if self.valid else 'INVALID'}",
        ]
        return out


def verify(p: Form, cert: Certificate) -> VerificationReport:
    """Recheck a certificate from its points and weights alone.

    The verdict rests only on the moment matrix being PSD and l_a(p) < 0; the
    rank, the Cayley-Bacharach identity and the zero set are diagnostics.
    """
    pts = cert.points
    a = cert.a
    is_psd, rk = psd_rank(moment_matrix(pts, a))
    l_value = sum((aj * p(v) for aj, v in zip(a, pts)), Fraction(0))
    identity = None
    if all(a):
        identity = sum((uj**2 / aj for uj, aj in zip(cert.u, a)), Fraction(0))
    u_ok = len(cert.u) == len(pts) and not any(cb_residuals(pts, cert.u))
    try:
        check_zero_set(p, pts, cert.zero_count)
        zs_ok, zs_msg = True, ""
    except ZeroSetMismatch as exc:
        zs_ok, zs_msg = False, str(exc)
    return VerificationReport(
        is_psd=is_psd,
        rank=rk,
        expected_rank=expected_rank(len(pts[0])),
        l_value=l_value,
        l_value_matches=(l_value == cert.l_value),
        cb_identity=identity,
        u_annihilates=u_ok,
        zero_set_ok=zs_ok,
        zero_set_message=zs_msg,
    )


@dataclass(frozen=True)
class Perturbation:
    lam: Fraction
    form: Form
    l_value: Fraction


def perturb(p: Form, cert: Certificate, r: Form) -> Perturbation:
    """A strictly positive form n = p + lam*r still separated by the same functional, with l_a(n) = l_a(p)/2."""
    l_p = sum((aj * p(v) for aj, v in zip(cert.a, cert.points)), Fraction(0))
    if l_p >= 0:
        raise ValueError("certificate does not separate p")
    l_r = sum((aj * r(v) for aj, v in zip(cert.a, cert.points)), Fraction(0))
    if l_r <= 0:
        raise ValueError(f"r not suitable: l_a(r) = {format_rat(l_r)} is not positive")
    lam = -l_p / (2 * l_r)
    n = p + r.scale(lam)
    return Perturbation(lam, n, l_p + lam * l_r)


def seven_point_fast_check(
    p: Form, zeros: Sequence[Sequence], v8: Sequence, h: Form, seed: int = 0
) -> bool:
    """Decide u_8^2 p(v_8) != u_9^2 p(v_9) through a cubic h vanishing on the seven zeros.

    True means a certificate exists on zeros + v_8 + residual point (with the
    negative weight on whichever side is larger).
    """
    zeros = [as_point(v) for v in zeros]
    if len(zeros) != 7 or len(zeros[0]) != 3:
        raise ValueError("the fast check needs seven zeros of a ternary sextic")
    if h.degree != 3 or any(h(v) != 0 for v in zeros):
        raise ValueError("h must be a cubic vanishing on the seven zeros")
    v8 = as_point(v8)
    v9 = residual_point(zeros + [v8], seed=seed)
    h8, h9 = h(v8), h(v9)
    if h8 == 0 and h9 == 0:
        raise ValueError("h vanishes at both extra points; choose a different h")
    return h9**2 * p(v8) != h8**2 * p(v9)


# -- text format ---------------------------------------------------------------------

SECTIONS = ("points", "u", "a", "neg_index", "l_value", "meta")


def format_certificate(cert: Certificate, seed: int | None = None) -> str:
    sys_ = cert.system
    lines = ["# separating functional l(f) = sum_j a_j f(v_j); indices are 1-based", "[points]"]
    lines += [" ".join(format_rat(x) for x in v) for v in cert.points]
    lines.append("[u]")
    lines += [format_rat(x) for x in cert.u]
    lines.append("[a]")
    lines += [format_rat(x) for x in cert.a]
    lines += ["[neg_index]", str(cert.neg_index + 1)]
    lines += ["[l_value]", format_rat(cert.l_value)]
    lines += [
        "[meta]",
        f"nvars = {sys_.nvars}",
        f"zero_count = {sys_.config.zero_count}",
        f"residual_index = {sys_.residual_index + 1}",
        f"seed = {sys_.seed if seed is None else seed}",
        f"N = {'' if cert.N is None else format_rat(cert.N)}",
        f"threshold = {'' if cert.threshold is None else format_rat(cert.threshold)}",
        f"tool_version = {__version__}",
        "trust = the target is assumed nonnegative and to vanish on no real points besides the declared zeros",
    ]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    sections: dict[str, list[str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in SECTIONS:
                raise ParseError(f"unknown section [{current}]")
            if current in sections:
                raise ParseError(f"duplicate section [{current}]")
            sections[current] = []
        elif current is None:
            raise ParseError(f"content outside a section: {line!r}")
        else:
            sections[current].append(line)
    missing = [s for s in SECTIONS if s not in sections]
    if missing:
        raise ParseError(f"missing sections: {', '.join(missing)}")
    meta = {}
    for line in sections["meta"]:
        key, sep, val = line.partition("=")
        if not sep:
            raise ParseError(f"bad meta line {line!r}")
        meta[key.strip()] = val.strip()
    try:
        nvars = int(meta["nvars"])
        zero_count = int(meta["zero_count"])
        residual_index = int(meta.get("residual_index", "0") or 0) - 1
        seed = int(meta.get("seed", "0") or 0)
        points = [tuple(parse_rat(t) for t in line.split()) for line in sections["points"]]
        u = tuple(parse_rat(t) for t in sections["u"])
        a = tuple(parse_rat(t) for t in sections["a"])
        (neg_line,) = sections["neg_index"]
        neg_index = int(neg_line) - 1
        (l_line,) = sections["l_value"]
        l_value = parse_rat(l_line)
        n_val = parse_rat(meta["N"]) if meta.get("N") else None
        thr = parse_rat(meta["threshold"]) if meta.get("threshold") else None
    except (KeyError, ValueError) as exc:
        raise ParseError(f"malformed certificate: {exc}") from None
    if nvars not in (3, 4) or any(len(v) != nvars for v in points):
        raise ParseError("points do not match nvars")
    if not (len(points) == len(u) == len(a)):
        raise ParseError("[points], [u] and [a] have different lengths")
    if not 0 <= neg_index < len(points):
        raise ParseError("neg_index out of range")
    if residual_index < 0:
        residual_index = len(points) - 1
    try:
        config = PointConfig(nvars, tuple(points), zero_count)
    except ValueError as exc:
        raise ParseError(f"bad points: {exc}") from None
    pencil = tuple(vanishing_space(points))
    system = CBSystem(config, pencil, residual_index, u, seed)
    return Certificate(system, a, neg_index, l_value, None, n_val, thr)
