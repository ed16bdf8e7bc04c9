"""Command-line interface.

Exit codes: 0 success, 1 separation condition fails, 2 degenerate
configuration, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import __version__, fixtures
from .certificate import (
    ConditionFailed,
    ZeroSetMismatch,
    build_a,
    certify,
    format_certificate,
    parse_certificate,
    perturb,
    separation_condition,
    verify,
)
from .configuration import (
    DegenerateConfiguration,
    PointConfig,
    canonical_representative,
    cb_coefficients,
    cb_residuals,
    complete_system,
    format_points,
    full_size,
    genericity_check,
    parse_points,
    projectively_equal,
    residual_point,
    system_from_points,
)
from .exactq import format_rat, parse_rat
from .forms import Form, ParseError, format_form, parse_form

EXIT_OK, EXIT_CONDITION, EXIT_DEGENERATE, EXIT_USAGE = 0, 1, 2, 3
AUTO_EXTRA_BUDGET = 256

log = logging.getLogger("nonsos")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def default_seed() -> int:
    raw = os.environ.get("NONSOS_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"NONSOS_SEED must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _fmt_point(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


# -- certify ---------------------------------------------------------------------------


def auto_extras(p: Form, zeros: Sequence, count: int, seed: int) -> list[tuple[Fraction, ...]]:
    """Draw integer points in [-5, 5]^n until zeros + extras form a usable configuration.

    A draw is kept when it passes the genericity check and its residual point is
    a new, simple base point.
    """
    rng = random.Random(seed)
    nvars = p.nvars
    for _ in range(AUTO_EXTRA_BUDGET):
        extras = [tuple(Fraction(rng.randint(-5, 5)) for _ in range(nvars)) for _ in range(count)]
        if any(not any(v) or p(v) <= 0 for v in extras):
            continue
        try:
            cfg = PointConfig(nvars, tuple(zeros) + tuple(extras), len(zeros))
        except DegenerateConfiguration:
            continue
        if genericity_check(cfg.points) is not None:
            continue
        try:
            residual_point(cfg.points, seed=seed)
        except DegenerateConfiguration:
            continue
        return extras
    raise DegenerateConfiguration(f"no generic extra points found in {AUTO_EXTRA_BUDGET} draws")


def cmd_certify(args) -> int:
    p = parse_form(_read(args.poly))
    nz, zeros = parse_points(_read(args.zeros))
    if nz != p.nvars:
        raise UsageError("zeros file and form disagree on nvars")
    need = full_size(p.nvars) - 1 - len(zeros)
    if args.auto_extra:
        if args.extras:
            raise UsageError("give either an extra-points file or --auto-extra, not both")
        extras = auto_extras(p, zeros, need, args.seed)
        print("auto extra points: " + ", ".join(_fmt_point(v) for v in extras))
    else:
        if not args.extras:
            raise UsageError("an extra-points file or --auto-extra is required")
        ne, extras = parse_points(_read(args.extras))
        if ne != p.nvars:
            raise UsageError("extra-points file and form disagree on nvars")
    if len(zeros) + len(extras) != full_size(p.nvars) - 1:
        raise UsageError(f"zeros + extras must give {full_size(p.nvars) - 1} points, got {len(zeros) + len(extras)}")
    config = PointConfig(p.nvars, tuple(zeros) + tuple(extras), len(zeros))
    neg = None if args.neg_index is None else args.neg_index - 1
    try:
        cert, reports = certify(p, config, neg_index=neg, N=args.N, seed=args.seed)
    except ConditionFailed as exc:
        for r in exc.reports:
            print(r)
        print("separation condition fails for every candidate negative index")
        return EXIT_CONDITION
    print(f"residual point: {_fmt_point(cert.points[cert.system.residual_index])}")
    print("u: " + ", ".join(str(x) for x in cert.u))
    for r in reports:
        print(r)
    report = verify(p, cert)
    for line in report.lines():
        print(line)
    Path(args.output).write_text(format_certificate(cert, seed=args.seed))
    print(f"certificate written to {args.output}")
    return EXIT_OK if report.valid else EXIT_CONDITION


def cmd_verify(args) -> int:
    p = parse_form(_read(args.poly))
    cert = parse_certificate(_read(args.certificate))
    if cert.system.nvars != p.nvars:
        raise UsageError("certificate and form disagree on nvars")
    report = verify(p, cert)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.valid else EXIT_CONDITION


def cmd_complete(args) -> int:
    _, pts = parse_points(_read(args.points))
    v = residual_point(pts, seed=args.seed)
    print(" ".join(format_rat(x) for x in v))
    return EXIT_OK


def cmd_cb(args) -> int:
    _, pts = parse_points(_read(args.points))
    PointConfig(len(pts[0]), tuple(pts))
    violation = genericity_check(pts)
    if violation is not None:
        raise DegenerateConfiguration(f"non-generic configuration: {violation}")
    u = cb_coefficients(pts)
    print(" ".join(format_rat(x) for x in u))
    return EXIT_OK


def cmd_perturb(args) -> int:
    p = parse_form(_read(args.poly))
    cert = parse_certificate(_read(args.certificate))
    r = parse_form(_read(args.interior))
    if not verify(p, cert).valid:
        print("certificate does not separate the given form")
        return EXIT_CONDITION
    try:
        result = perturb(p, cert, r)
    except ValueError as exc:
        print(exc)
        return EXIT_CONDITION
    Path(args.output).write_text(format_form(result.form))
    print(f"lambda = {format_rat(result.lam)} ({float(result.lam):.10g})")
    print(f"l_a(n) = {format_rat(result.l_value)}")
    print(f"perturbed form written to {args.output}")
    return EXIT_OK


# -- scan ------------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    q: Fraction
    s: Fraction
    lhs: Fraction | None = None
    rhs: Fraction | None = None
    excluded_reason: str | None = None

    @property
    def satisfied(self) -> bool:
        return self.excluded_reason is None and self.lhs < self.rhs

    def csv_fields(self) -> list[str]:
        return [
            format_rat(self.q),
            format_rat(self.s),
            "" if self.lhs is None else format_rat(self.lhs),
            "" if self.rhs is None else format_rat(self.rhs),
            "true" if self.satisfied else "false",
            self.excluded_reason or "",
        ]


SCAN_COLUMNS = ["q", "s", "lhs", "rhs", "satisfied", "excluded_reason"]


def _exclusion(q: Fraction, s: Fraction) -> str | None:
    if q == s:
        return "q=s"
    if q == -s:
        return "q=-s"
    if abs(q) == 1:
        return "q=+-1"
    if abs(s) == 1:
        return "s=+-1"
    if q == 2 - s:
        return "q=2-s"
    if q == -2 - s:
        return "q=-2-s"
    return None


def motzkin_symmetric_row(q, s, seed: int = 0) -> ScanRow:
    """Run the pipeline on the Motzkin zeros plus (q, s, 1) and (s, q, 1), negative weight on the residual point."""
    q, s = Fraction(q), Fraction(s)
    reason = _exclusion(q, s)
    if reason is not None:
        return ScanRow(q, s, excluded_reason=reason)
    try:
        config = PointConfig(3, tuple(fixtures.MOTZKIN_ZEROS) + ((q, s, 1), (s, q, 1)), 6)
        system = complete_system(config, seed=seed)
        report = separation_condition(fixtures.motzkin(), system, system.residual_index)
    except (DegenerateConfiguration, ZeroSetMismatch):
        return ScanRow(q, s, excluded_reason="genericity-failure")
    return ScanRow(q, s, report.lhs, report.rhs)


def _frange(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    out = []
    x = lo
    while x <= hi:
        out.append(x)
        x += step
    return out


def scan_grid(qmin, qmax, smin, smax, step, seed: int = 0, jobs: int = 1) -> list[ScanRow]:
    """Rows in row-major order (q outer, s inner) regardless of evaluation order."""
    qs = _frange(Fraction(qmin), Fraction(qmax), Fraction(step))
    ss = _frange(Fraction(smin), Fraction(smax), Fraction(step))
    cells = [(q, s) for q in qs for s in ss]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(motzkin_symmetric_row, *zip(*cells), [seed] * len(cells), chunksize=8))
    return [motzkin_symmetric_row(q, s, seed) for q, s in cells]


def cmd_scan(args) -> int:
    if args.family != "motzkin-symmetric":
        raise UsageError(f"unknown family {args.family!r}")
    try:
        qmin, qmax, smin, smax, step = (parse_rat(t) for t in args.grid)
    except ValueError as exc:
        raise UsageError(f"bad grid value: {exc}") from None
    if step <= 0 or qmin > qmax or smin > smax:
        raise UsageError("grid needs step > 0 and min <= max")
    rows = scan_grid(qmin, qmax, smin, smax, step, seed=args.seed, jobs=args.jobs)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(SCAN_COLUMNS)
        for row in rows:
            writer.writerow(row.csv_fields())
    finally:
        if args.output:
            out.close()
    return EXIT_OK


def read_scan_csv(text: str) -> list[ScanRow]:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(
            ScanRow(
                parse_rat(rec["q"]),
                parse_rat(rec["s"]),
                parse_rat(rec["lhs"]) if rec["lhs"] else None,
                parse_rat(rec["rhs"]) if rec["rhs"] else None,
                rec["excluded_reason"] or None,
            )
        )
    return rows


# -- examples ----------------------------------------------------------------------------


def _check(cond: bool, what: str) -> None:
    if not cond:
        raise AssertionError(what)


def _fixture_motzkin() -> None:
    m = fixtures.motzkin()
    config = PointConfig(3, tuple(fixtures.MOTZKIN_ZEROS + fixtures.MOTZKIN_EXTRAS), 6)
    cert, reports = certify(m, config)
    _check(projectively_equal(cert.points[-1], fixtures.MOTZKIN_RESIDUAL), "residual point is (1, 1, -7/2)")
    _check(reports[0].neg_index == 8 and reports[0].holds, "condition holds with the residual point negative")
    report = verify(m, cert)
    _check(report.valid and report.rank == 7, "certificate verifies with rank 7")
    listed_cfg = PointConfig(3, tuple(fixtures.MOTZKIN_ZEROS + fixtures.MOTZKIN_EXTRAS) + (fixtures.MOTZKIN_RESIDUAL,), 6)
    cert100 = build_a(m, system_from_points(listed_cfg), 8, 100)
    _check(cert100.l_value == fixtures.MOTZKIN_L_VALUE_N100, "l_a(m) = -1484936/2143157 with N = 100")


def _fixture_failing() -> None:
    m = fixtures.motzkin()
    pts = tuple(fixtures.MOTZKIN_ZEROS + fixtures.FAILING_EXTRAS)
    _check(projectively_equal(residual_point(pts), fixtures.FAILING_RESIDUAL), "residual point is (1, 1, 65/34)")
    system = system_from_points(PointConfig(3, pts + (fixtures.FAILING_RESIDUAL,), 6))
    scale = fixtures.FAILING_U[0] / system.u[0]
    _check(all(x * scale == y for x, y in zip(system.u, fixtures.FAILING_U)), "u matches up to scale")
    for j in (6, 7, 8):
        _check(not separation_condition(m, system, j).holds, f"condition fails with index {j + 1} negative")


def _fixture_reznick() -> None:
    p = fixtures.reznick()
    config = PointConfig(3, tuple(fixtures.REZNICK_ZEROS) + (fixtures.REZNICK_EXTRA,), 7)
    cert, _ = certify(p, config, N=10**9)
    _check(cert.points[-1] == fixtures.REZNICK_RESIDUAL, "residual point is (3, 10, 1)")
    _check(list(cert.u) == fixtures.REZNICK_U, "u = (84, -1260, -36, -90, 63, 35, -60, 3, 1)")
    _check(cert.u[7] ** 2 * p(cert.points[7]) == 48456, "u_8^2 p(v_8) = 48456")
    _check(cert.u[8] ** 2 * p(cert.points[8]) == 56016, "u_9^2 p(v_9) = 56016")
    _check(cert.a[8] == fixtures.REZNICK_A9_N1E9, "a_9 = -500000000/4500806423")
    report = verify(p, cert)
    _check(report.valid and report.rank == 7 and report.cb_identity == 0, "certificate verifies with rank 7")


def _fixture_cube() -> None:
    u = cb_coefficients(fixtures.CUBE_VERTICES)
    parity = [a * b * c for a, b, c, _ in fixtures.CUBE_VERTICES]
    _check(u == [-x for x in parity] or u == parity, "u proportional to vertex parity")
    _check(not any(cb_residuals(fixtures.CUBE_VERTICES, u)), "all ten quadric relations hold")
    for i, v in enumerate(fixtures.CUBE_VERTICES):
        rest = fixtures.CUBE_VERTICES[:i] + fixtures.CUBE_VERTICES[i + 1 :]
        _check(projectively_equal(residual_point(rest), v), f"dropping vertex {i + 1} recovers it")


def _fixture_choi_lam() -> None:
    s = fixtures.choi_lam()
    cert, _ = certify(s, PointConfig(4, tuple(fixtures.CHOI_LAM_ZEROS), 7))
    _check(canonical_representative(cert.points[-1]) == (0, 0, 0, 1), "eighth point is (0, 0, 0, 1)")
    report = verify(s, cert)
    _check(report.valid and report.rank == 6, "certificate verifies with rank 6")


FIXTURES: dict[str, Callable[[], None]] = {
    "motzkin": _fixture_motzkin,
    "motzkin-failing": _fixture_failing,
    "reznick-seven-zeros": _fixture_reznick,
    "cube-vertices": _fixture_cube,
    "choi-lam": _fixture_choi_lam,
}


def cmd_examples(args) -> int:
    if args.list:
        for name in FIXTURES:
            print(name)
        return EXIT_OK
    names = args.names or list(FIXTURES)
    unknown = [n for n in names if n not in FIXTURES]
    if unknown:
        raise UsageError(f"unknown fixture(s): {', '.join(unknown)}")
    failed = 0
    for name in names:
        try:
            FIXTURES[name]()
            status = "PASS"
        except (AssertionError, ValueError) as exc:
            status = f"FAIL  {exc}"
            failed += 1
        print(f"{name:<22} {status}")
    return EXIT_OK if not failed else EXIT_CONDITION


# -- entry point ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nonsos", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_seed(p):
        p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $NONSOS_SEED or 0)")

    p = sub.add_parser("certify", help="build and verify a separating certificate")
    p.add_argument("poly")
    p.add_argument("zeros")
    p.add_argument("extras", nargs="?")
    p.add_argument("--auto-extra", action="store_true", help="draw the extra points at random")
    p.add_argument("--neg-index", type=int, help="1-based index of the negative weight")
    p.add_argument("--N", type=parse_rat, help="weight on the zeros (default: twice the exact threshold)")
    p.add_argument("-o", "--output", default="certificate.txt")
    add_seed(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="check a certificate against a form")
    p.add_argument("poly")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("complete", help="print the residual intersection point")
    p.add_argument("points")
    add_seed(p)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("cb", help="print the Cayley-Bacharach coefficients")
    p.add_argument("points")
    p.set_defaults(func=cmd_cb)

    p = sub.add_parser("scan", help="scan the symmetric Motzkin family over a grid")
    p.add_argument("--family", default="motzkin-symmetric")
    p.add_argument("--grid", nargs=5, required=True, metavar=("QMIN", "QMAX", "SMIN", "SMAX", "STEP"))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    add_seed(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("perturb", help="push a certified form into the interior")
    p.add_argument("poly")
    p.add_argument("certificate")
    p.add_argument("interior")
    p.add_argument("-o", "--output", default="perturbed.txt")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("examples", help="run the built-in worked instances")
    p.add_argument("names", nargs="*")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
        if getattr(args, "seed", 0) is None:
            args.seed = default_seed()
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ZeroSetMismatch as exc:
        # the inputs contradict each other, which is a usage problem rather than a degeneracy
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateConfiguration as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
