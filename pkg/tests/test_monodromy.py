from fractions import Fraction
from math import comb

import pytest

from spincalogero import monodromy as mono
from spincalogero.coxeter import build_root_system, generate_group, model_multiplicities, orbit
from spincalogero.dalg import DunklRealization, lift_spin
from spincalogero.opalg import NormalFormOperator
from spincalogero.poly import Poly
from spincalogero.scalars import I, root_of_unity
from spincalogero.spin import SpinMatrix, builtin_rep, local, orbit_rep, transposition


def y(n, j):
    return Poly.var(n, j)


def units(n):
    return [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]


@pytest.fixture(scope="module")
def b2_orbit():
    g = generate_group(build_root_system("B", 2))
    orb = orbit(g, (1, 0), order_override=[(1, 0), (-1, 0), (0, 1), (0, -1)])
    rep = orbit_rep(g, orb, 2)
    return g, rep, mono.build_monodromy(list(orb.points), 2, 2, 6)


@pytest.fixture(scope="module")
def b2_standard():
    g = generate_group(build_root_system("B", 2))
    rep = builtin_rep(g, "BL_standard", 2)
    T = mono.build_monodromy(units(2), 2, 2, 6)
    tw = mono.TwistData.plain(rep.twist_matrix, 2)
    return g, rep, T, tw


def test_leading_coefficients(b2_orbit):
    g, rep, T = b2_orbit
    M = T.M
    ident = SpinMatrix.identity(2, M).map(lambda v: Poly.constant(2, v))
    assert mono.partial_trace(T.coeffs[0]) == ident.scale(M)
    # sites e1, -e1, e2, -e2 carry the forms y1, -y1, y2, -y2
    want = SpinMatrix.zero(2, M + 1)
    for k, (j, sign) in enumerate([(0, 1), (0, -1), (1, 1), (1, -1)]):
        P = lift_spin(transposition(2, M + 1, k + 1, M + 1), 2)
        want = want + P.map(lambda p, j=j, sign=sign: p * y(2, j).scale(sign))
    assert T.coeffs[1] == want


def test_trivial_twist(b2_orbit):
    _, _, T = b2_orbit
    tw = mono.TwistData.plain([[1, 0], [0, 1]], 1)
    assert mono.apply_twist(T, tw).coeffs == T.coeffs


def test_order_two_twist_formula(b2_standard):
    # B(u) = (T(u) - Q_a T(-u) Q_a)/2, so B^(n) = (T^(n) + (-1)^n Q_a T^(n) Q_a)/2
    g, rep, T, tw = b2_standard
    B = mono.apply_twist(T, tw)
    Qa = lift_spin(local(2, 3, rep.twist_matrix, 3), 2)
    for n, Tn in enumerate(T.coeffs):
        assert B.coeffs[n] == (Tn + (Qa @ Tn @ Qa).scale((-1) ** n)).scale(Fraction(1, 2))


def test_symmetry_and_paths(b2_standard):
    g, rep, T, tw = b2_standard
    B = mono.apply_twist(T, tw)
    assert mono.check_symmetry(B, tw).passed
    assert mono.check_two_paths(T, tw).passed


def test_shift_not_allowed(b2_standard):
    _, _, T, tw = b2_standard
    shifted = mono.TwistData(tw.sigma, 2, -1, shifts=[Poly.zero(2), y(2, 0)])
    with pytest.raises(mono.ShiftNotAllowed):
        mono.apply_twist(T, shifted)


def test_zero_shift_matches_plain(b2_standard):
    _, _, T, tw = b2_standard
    zero = mono.TwistData(tw.sigma, 2, -1, shifts=[Poly.zero(2)] * 2)
    assert mono.apply_shifted_twist(T, zero).coeffs == mono.apply_twist(T, tw).coeffs


def _reexpanded(T, sigma, order, tau, shifts, weight):
    """w sum_j tau^j sigma^j T(tau^j (u - S_j)) sigma^-j from the plain series by binomial re-expansion."""
    N, M, nv = T.N, T.M, T.nvars
    out = []
    for total in range(T.cutoff + 1):
        acc = SpinMatrix.zero(N, M + 1)
        for j in range(order):
            s = lift_spin(local(N, M + 1, mono._local_power(sigma, N, j), M + 1), nv)
            si = lift_spin(local(N, M + 1, mono._local_power(sigma, N, (-j) % order), M + 1), nv)
            inner = SpinMatrix.zero(N, M + 1)
            for n in range(total + 1):
                r = total - n
                c = tau ** (j - j * (n + 1)) * comb(total, r)
                inner = inner + T.coeffs[n].map(lambda p, r=r, c=c: p * (shifts[j] ** r).scale(c))
            acc = acc + s @ inner @ si
        out.append(acc.scale(weight))
    return out


def test_g2_shifted_twist():
    g = generate_group(build_root_system("I2R3", 6))
    rep = builtin_rep(g, "G2_three_spin", 2)
    T = mono.build_monodromy(units(3), 3, 2, 4)
    D = Poly.linear([Fraction(2, 3)] * 3)
    tw = mono.TwistData(rep.twist_matrix, 2, -1, shifts=[Poly.zero(3), D], weight=1)
    B = mono.apply_shifted_twist(T, tw)
    assert B.coeffs == _reexpanded(T, rep.twist_matrix, 2, root_of_unity(2, 1), [Poly.zero(3), D], 1)


def test_i2m_shifted_twist():
    m = 4
    g = generate_group(build_root_system("I2R2", m))
    rep = builtin_rep(g, "I2m_two_spin", 2)
    T = mono.build_monodromy([(1, I), (I, 1)], 2, 2, 4)
    h = Poly.linear([1, I]) * Poly.linear([1, -I])
    qinv = mono._local_power(rep.twist_matrix, 2, m - 1)
    tau = root_of_unity(m, 1)
    tw = mono.TwistData(qinv, m, tau, shifts=[h] * m, weight=1)
    B = mono.apply_shifted_twist(T, tw)
    assert B.coeffs == _reexpanded(T, qinv, m, tau, [h] * m, 1)


def test_complex_dunkl():
    m = 6
    rs = build_root_system("I2R2", m)
    g = generate_group(rs)
    R = DunklRealization(rs, g, model_multiplicities(rs, g, Fraction(1, 2), 3))
    d, db = mono.build_complex_dunkl(R)
    a, b = g.named["a"], g.named["b"]
    tau = root_of_unity(m, 1)
    assert d.conjugate_by(a) == d.scale(tau ** -1)
    assert db.conjugate_by(a) == db.scale(tau)
    assert d.conjugate_by(b) == db.scale(I)
    R0 = DunklRealization(rs, g, model_multiplicities(rs, g, 0, 0))
    d0, _ = mono.build_complex_dunkl(R0)
    free = NormalFormOperator.partial(g, 0, -I) + NormalFormOperator.partial(g, 1, 1)
    assert d0 == free


def test_halfloop_single_site():
    g = generate_group(build_root_system("B", 2))
    T = mono.build_monodromy([(1, 0)], 2, 2, 2)
    assert mono.check_halfloop(T, 2).passed


def test_halfloop_orbit_model(b2_orbit):
    g, rep, T = b2_orbit
    report = mono.check_halfloop(T, 5, rep)
    assert report.passed
    orders = {(e[0]["m"], e[0]["n"]) for e in report.entries if "n" in e[0]}
    assert {(m, n) for m in range(6) for n in range(6) if m + n <= 5} <= orders


def test_halfloop_negative_control(b2_orbit):
    g, rep, T = b2_orbit
    bad = mono.build_monodromy([(1, 0), (-1, 0), (0, 1), (0, -1)], 2, 2, 3,
                               signs=[-1, 1, 1, 1])
    report = mono.check_halfloop(bad, 3, rep)
    assert not report.passed
    assert report.failures() and report.failures()[0][2]


def test_aux_swap_antisymmetry(b2_orbit):
    # P_ab [T_a^(m), T_b^(n)] P_ab = -[T_a^(n), T_b^(m)]
    g, rep, T = b2_orbit
    M = T.M
    P = lift_spin(transposition(2, M + 2, M + 1, M + 2), 2)

    def comm(m, n):
        A, B = mono._embed(T.coeffs[m], "a"), mono._embed(T.coeffs[n], "b")
        return A @ B - B @ A

    for m, n in [(0, 1), (1, 2), (2, 3)]:
        assert P @ comm(m, n) @ P == -comm(n, m)


def test_twisted_relation(b2_standard):
    g, rep, T, tw = b2_standard
    B = mono.apply_twist(T, tw)
    assert mono.check_twisted(B, tw, 5, rep).passed
    assert mono.check_intertwine(B, rep, strong=True).passed


def test_traces_and_hierarchy(b2_standard):
    g, rep, T, tw = b2_standard
    B = mono.apply_twist(T, tw)
    tr = mono.trace_polynomials(B)
    s2 = y(2, 0) ** 2 + y(2, 1) ** 2
    s4 = y(2, 0) ** 4 + y(2, 1) ** 4
    assert tr[0] == Poly.constant(2, T.M)
    assert tr[2] == s2 and tr[4] == s4
    assert all(tr[n].is_zero() for n in (1, 3, 5))
    assert mono.check_hierarchy(mono.trace_and_extract(B), B, rep).passed


def test_jacobian_examples():
    s2 = y(2, 0) ** 2 + y(2, 1) ** 2
    s4 = y(2, 0) ** 4 + y(2, 1) ** 4
    assert mono.jacobian_rank([s2.scale(-1), s4], (1, 2)) == 2
    assert mono.jacobian_rank([s2, s2 * s2], (1, 2)) == 1
    assert mono.generic_rank([s2, s4], seed=(3, 5)) == 2
    with pytest.raises(mono.DegeneratePoint):
        list(mono.sample_points(2, seed=(1, 2, 3)))


def test_subring_membership():
    p1 = Poly.linear([1, 1, 1])
    p2 = y(3, 0) ** 2 + y(3, 1) ** 2 + y(3, 2) ** 2
    assert mono.in_subring(p1 * p1 - p2.scale(3), [p1, p2]) is not None
    assert mono.in_subring(y(3, 0) ** 3, [p1, p2]) is None


def test_validate_shift():
    rs = build_root_system("I2R3", 6)
    g = generate_group(rs)
    R = DunklRealization(rs, g, model_multiplicities(rs, g, 2, Fraction(-1, 3)))
    assert mono.validate_shift(Poly.linear([Fraction(2, 3)] * 3), R)
