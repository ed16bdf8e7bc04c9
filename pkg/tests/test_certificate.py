import random
from dataclasses import replace
from fractions import Fraction

import pytest

from nonsos import fixtures
from nonsos.certificate import (
    ConditionFailed,
    ZeroSetMismatch,
    build_a,
    certify,
    expected_rank,
    format_certificate,
    moment_matrix,
    negative_weight,
    parse_certificate,
    perturb,
    separation_condition,
    seven_point_fast_check,
    threshold,
    verify,
)
from nonsos.configuration import PointConfig, complete_system, residual_point, system_from_points, vanishing_space
from nonsos.exactq import matvec, psd_rank, rank
from nonsos.forms import Form, ParseError, veronese

x, y, z = (Form.variable(3, i) for i in range(3))


def test_condition_reznick(reznick, reznick_system):
    r = separation_condition(reznick, reznick_system, 8)
    assert (r.lhs, r.rhs, r.holds) == (48456, 56016, True)


def test_condition_failing_instance(motzkin, failing_system):
    # u rescaled to the printed normalisation (u_6 = 1); residual representative (1, 1, 65/34)
    scale = failing_system.u[5] ** 2
    r9 = separation_condition(motzkin, failing_system, 8)
    assert (r9.lhs / scale, r9.rhs / scale) == (Fraction(69400881, 256), Fraction(64069137, 256))
    assert round(float(r9.lhs / scale), 4) == 271097.1914
    assert round(float(r9.rhs / scale), 4) == 250270.0664
    for j in (6, 7):
        r = separation_condition(motzkin, failing_system, j)
        assert not r.holds
        assert round(float(r.lhs / scale), 3) == 3291366.873
        assert round(float(r.rhs / scale), 5) == 67774.29785
    assert not r9.holds


def test_condition_with_eight_zeros_has_empty_left_side():
    # the Robinson sextic; eight of its ten real zeros force the ninth point (1 : 0 : 0)
    p = (
        x**6 + y**6 + z**6
        - (x**4 * y**2 + x**2 * y**4 + x**4 * z**2 + x**2 * z**4 + y**4 * z**2 + y**2 * z**4)
        + 3 * (x * y * z) ** 2
    )
    zeros = [(1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1), (1, 1, 0), (1, -1, 0), (1, 0, 1), (1, 0, -1)]
    assert all(p(v) == 0 for v in zeros)
    system = complete_system(PointConfig(3, tuple(zeros), 8))
    assert system.points[8] == (1, 0, 0)
    r = separation_condition(p, system, 8)
    assert r.lhs == 0 and r.rhs > 0 and r.holds
    cert = build_a(p, system, 8)
    assert verify(p, cert).valid


def test_condition_zero_set_mismatch(motzkin, reznick_system):
    with pytest.raises(ZeroSetMismatch):
        separation_condition(motzkin, reznick_system, 8)
    with pytest.raises(ValueError):
        separation_condition(fixtures.reznick(), reznick_system, 2)


def test_fast_check_reznick(reznick):
    h = vanishing_space(fixtures.REZNICK_ZEROS)[0]
    assert seven_point_fast_check(reznick, fixtures.REZNICK_ZEROS, fixtures.REZNICK_EXTRA, h)


def test_fast_check_is_false_for_a_square():
    h = vanishing_space(fixtures.REZNICK_ZEROS)[0]
    assert not seven_point_fast_check(h * h, fixtures.REZNICK_ZEROS, fixtures.REZNICK_EXTRA, h)


@pytest.mark.parametrize("seed", range(10))
def test_fast_check_same_for_every_h(seed, reznick):
    rng = random.Random(seed)
    basis = vanishing_space(fixtures.REZNICK_ZEROS)
    v9 = residual_point(fixtures.REZNICK_ZEROS + [fixtures.REZNICK_EXTRA])
    h = Form.zero(3, 3)
    for b in basis:
        h = h + b.scale(rng.randint(-5, 5))
    if h(fixtures.REZNICK_EXTRA) == 0 and h(v9) == 0:
        with pytest.raises(ValueError):
            seven_point_fast_check(reznick, fixtures.REZNICK_ZEROS, fixtures.REZNICK_EXTRA, h)
        return
    assert seven_point_fast_check(reznick, fixtures.REZNICK_ZEROS, fixtures.REZNICK_EXTRA, h)


def test_fast_check_rejects_bad_h(reznick):
    with pytest.raises(ValueError):
        seven_point_fast_check(reznick, fixtures.REZNICK_ZEROS, fixtures.REZNICK_EXTRA, x**3)


def test_build_a_reznick(reznick, reznick_system):
    cert = build_a(reznick, reznick_system, 8, 10**9)
    assert cert.a[8] == Fraction(-500000000, 4500806423)
    assert cert.a[:7] == (10**9,) * 7 and cert.a[7] == 1
    # rearranged balance identity, with the printed u and a substituted by hand
    u = fixtures.REZNICK_U
    s = Fraction(sum(c * c for c in u[:7]), 10**9) + u[7] ** 2 + Fraction(u[8] ** 2) / cert.a[8]
    assert sum(c * c for c in u[:7]) == 1612846
    assert s == 0
    assert cert.l_value < 0


def test_build_a_default_threshold(reznick, reznick_system):
    n_star = threshold(reznick, reznick_system, 8)
    # S_k P / (u_9^2 p(v_9) - S P) with S_k = 1612846, S = 9, P = 5384
    assert n_star == Fraction(1612846 * 5384, 56016 - 48456)
    cert = build_a(reznick, reznick_system, 8)
    assert cert.N == 2 * n_star
    with pytest.raises(ValueError, match="must exceed"):
        build_a(reznick, reznick_system, 8, n_star)
    for factor in (3, 10, 1000):
        c = build_a(reznick, reznick_system, 8, n_star * factor)
        assert verify(reznick, c).valid


def test_build_a_refuses_failing_condition(motzkin, failing_system):
    with pytest.raises(ConditionFailed):
        build_a(motzkin, failing_system, 8)


def test_motzkin_with_hundred(motzkin):
    pts = tuple(fixtures.MOTZKIN_ZEROS + fixtures.MOTZKIN_EXTRAS) + (fixtures.MOTZKIN_RESIDUAL,)
    system = system_from_points(PointConfig(3, pts, 6))
    cert = build_a(motzkin, system, 8, 100)
    assert cert.l_value == fixtures.MOTZKIN_L_VALUE_N100 < 0
    # u with the listed representatives, scaled so u_7 = 1; only u_9 differs from the printed vector
    u = [c / system.u[6] for c in system.u]
    assert u == [-64, -64, Fraction(-40, 9), -4, -4, Fraction(24, 5), 1, 1, Fraction(-16, 45)]
    assert (u[6] ** 2 + u[7] ** 2) * (motzkin(pts[6]) + motzkin(pts[7])) == 4
    assert u[8] ** 2 * motzkin(pts[8]) == 228


def test_moment_matrix_point_evaluation(reznick_points):
    a = [1] + [0] * 8
    g = moment_matrix(reznick_points, a)
    w = veronese(reznick_points[0], 3)
    assert g == [[wi * wj for wj in w] for wi in w]
    assert psd_rank(g) == (True, 1)


def test_moment_matrix_of_certificate(reznick_cert):
    g = moment_matrix(reznick_cert.points, reznick_cert.a)
    assert psd_rank(g) == (True, 7)
    for q in fixtures.REZNICK_PENCIL:
        assert not any(matvec(g, q.to_vector()))


def test_moment_matrix_quadratic_form(reznick_cert):
    rng = random.Random(5)
    g = moment_matrix(reznick_cert.points, reznick_cert.a)
    for _ in range(20):
        f = Form.from_vector(3, 3, [rng.randint(-3, 3) for _ in range(10)])
        c = f.to_vector()
        lhs = sum(ci * gi for ci, gi in zip(c, matvec(g, c)))
        assert lhs == sum(a * f(v) ** 2 for a, v in zip(reznick_cert.a, reznick_cert.points))


def test_positive_weights_give_rank_nine(reznick_points):
    rng = random.Random(3)
    a = [Fraction(rng.randint(1, 9)) for _ in reznick_points]
    g = moment_matrix(reznick_points, a)
    assert psd_rank(g) == (True, 8)
    # nine generic points with no Cayley-Bacharach relation
    pts = reznick_points[:8] + [(1, 2, 5)]
    assert psd_rank(moment_matrix(pts, a)) == (True, 9)


def test_verify_reznick(reznick, reznick_cert):
    report = verify(reznick, reznick_cert)
    assert report.valid and report.rank == 7 == expected_rank(3)
    assert report.l_value < 0 and report.cb_identity == 0
    assert report.u_annihilates and report.zero_set_ok


def test_verify_rejects_positive_weight(reznick, reznick_cert):
    a = list(reznick_cert.a)
    a[8] = -a[8]
    report = verify(reznick, replace(reznick_cert, a=tuple(a)))
    assert report.is_psd and report.l_value > 0 and not report.valid


def test_verify_rejects_too_negative_weight(reznick, reznick_cert):
    a = list(reznick_cert.a)
    a[8] = a[8] * Fraction(11, 10)
    g = moment_matrix(reznick_cert.points, a)
    assert not psd_rank(g)[0]
    assert not verify(reznick, replace(reznick_cert, a=tuple(a))).valid


def test_scale_invariance(reznick, reznick_cert):
    for c in (Fraction(1, 7), Fraction(3), Fraction(10**6)):
        scaled = replace(reznick_cert, a=tuple(c * a for a in reznick_cert.a))
        report = verify(reznick, scaled)
        assert report.valid and report.l_value == c * verify(reznick, reznick_cert).l_value
        g0 = moment_matrix(reznick_cert.points, reznick_cert.a)
        g1 = moment_matrix(scaled.points, scaled.a)
        assert g1 == [[c * v for v in row] for row in g0]


def test_negative_weight_identity():
    u = [Fraction(v) for v in fixtures.REZNICK_U]
    a = [Fraction(2)] * 9
    a[8] = negative_weight(u, a, 8)
    assert sum(c * c / w for c, w in zip(u, a)) == 0


def test_sos_inputs_never_certified(reznick_system):
    q1, q2 = fixtures.REZNICK_PENCIL
    g = q1 * q1 + q2 * q2
    assert all(g(v) == 0 for v in reznick_system.points)
    with pytest.raises(ZeroSetMismatch):
        separation_condition(g, reznick_system, 8)


def test_certify_motzkin(motzkin, motzkin_cert):
    assert motzkin_cert.points[-1] == (2, 2, -7)
    report = verify(motzkin, motzkin_cert)
    assert report.valid and report.rank == 7


def test_certify_failing(motzkin):
    cfg = PointConfig(3, tuple(fixtures.MOTZKIN_ZEROS + fixtures.FAILING_EXTRAS), 6)
    with pytest.raises(ConditionFailed) as info:
        certify(motzkin, cfg)
    assert [r.neg_index for r in info.value.reports] == [8, 6, 7]
    assert not any(r.holds for r in info.value.reports)


def test_certify_uses_swap():
    # find a seven-zero instance where the residual side is smaller and the swap is needed
    p = fixtures.reznick()
    rng = random.Random(0)
    seen_swap = False
    for _ in range(40):
        v8 = tuple(rng.randint(-5, 5) for _ in range(3))
        if not any(v8) or p(v8) == 0:
            continue
        try:
            cert, reports = certify(p, PointConfig(3, tuple(fixtures.REZNICK_ZEROS) + (v8,), 7))
        except ValueError:
            continue
        assert verify(p, cert).valid
        if cert.neg_index == 7:
            seen_swap = True
            assert not reports[0].holds and reports[1].holds
    assert seen_swap


def test_certify_quaternary():
    s = fixtures.choi_lam()
    cert, _ = certify(s, PointConfig(4, tuple(fixtures.CHOI_LAM_ZEROS), 7))
    report = verify(s, cert)
    assert report.valid and report.rank == expected_rank(4) == 6
    cert2, _ = certify(s, PointConfig(4, tuple(fixtures.CHOI_LAM_ZEROS[:6]) + ((1, 2, 3, 1),), 6))
    assert verify(s, cert2).valid


def test_certify_validates_inputs(motzkin):
    with pytest.raises(ZeroSetMismatch):
        certify(motzkin, PointConfig(3, tuple(fixtures.MOTZKIN_EXTRAS + fixtures.MOTZKIN_ZEROS), 6))
    with pytest.raises(ValueError):
        certify(fixtures.choi_lam(), PointConfig(3, tuple(fixtures.MOTZKIN_ZEROS + fixtures.MOTZKIN_EXTRAS), 6))


def test_perturb_motzkin(motzkin, motzkin_cert):
    r = fixtures.sphere_cube()
    result = perturb(motzkin, motzkin_cert, r)
    assert result.lam > 0
    l_m = verify(motzkin, motzkin_cert).l_value
    assert result.l_value == l_m / 2 < 0
    n = result.form
    assert sum(a * n(v) for a, v in zip(motzkin_cert.a, motzkin_cert.points)) == l_m / 2
    for v in motzkin_cert.points[:6]:
        assert n(v) == result.lam * r(v) > 0


def test_perturb_rejects_unsuitable_r(motzkin, motzkin_cert):
    with pytest.raises(ValueError, match="not suitable"):
        perturb(motzkin, motzkin_cert, -fixtures.sphere_cube())


def test_certificate_text_round_trip(reznick, reznick_cert):
    text = format_certificate(reznick_cert)
    back = parse_certificate(text)
    assert back.a == reznick_cert.a and back.u == reznick_cert.u
    assert back.points == reznick_cert.points and back.neg_index == reznick_cert.neg_index
    assert back.l_value == reznick_cert.l_value and back.N == reznick_cert.N
    assert format_certificate(back) == text
    assert verify(reznick, back).valid


def test_certificate_parse_errors(reznick_cert):
    text = format_certificate(reznick_cert)
    with pytest.raises(ParseError):
        parse_certificate(text.replace("[u]", "[uu]"))
    with pytest.raises(ParseError):
        parse_certificate(text.replace("[l_value]\n", "[l_value]\n1/2\n"))
    with pytest.raises(ParseError):
        parse_certificate("[points]\n1 0 0\n")
