"""Explicit Hamiltonians against the reduced hierarchy element J Lambda.

Every model is compared in the displayed form.  Where that form disagrees, a
corrected form is checked too, so that the disagreement is pinned to a single
term.
"""

from fractions import Fraction

import pytest

from spincalogero import monodromy as mono
from spincalogero.coxeter import build_root_system, generate_group, model_multiplicities, orbit
from spincalogero.dalg import DunklRealization
from spincalogero.hamiltonians import (
    bl_orbit_hamiltonian,
    bl_standard_hamiltonian,
    g2_six_hamiltonian,
    g2_three_hamiltonian,
    i2m_hamiltonian,
    laplacian,
)
from spincalogero.poly import Poly
from spincalogero.spin import builtin_rep, orbit_rep

KS, KL = Fraction(1, 2), Fraction(-2)


def sq(n):
    return sum((Poly.var(n, j) ** 2 for j in range(n)), Poly.zero(n))


def setup(label, n, ks=KS, kl=KL):
    rs = build_root_system(label, n)
    g = generate_group(rs)
    return g, DunklRealization(rs, g, model_multiplicities(rs, g, ks, kl))


@pytest.mark.parametrize("L", [2, 3])
def test_bl_standard(L):
    g, R = setup("B", L)
    rep = builtin_rep(g, "BL_standard", 2)
    J = mono.realize_reduced(sq(L), R, rep)
    assert J == bl_standard_hamiltonian(g, 2, KS, KL, rep.twist_matrix)


def test_bl_orbit():
    g, R = setup("B", 2)
    rep = orbit_rep(g, orbit(g, (1, 0), order_override=[(1, 0), (-1, 0), (0, 1), (0, -1)]), 2)
    assert mono.realize_reduced(sq(2), R, rep) == bl_orbit_hamiltonian(g, 2, KS, KL)


def test_g2_three_long_terms_need_factor_three():
    g, R = setup("I2R3", 6)
    rep = builtin_rep(g, "G2_three_spin", 2)
    J = mono.realize_reduced(sq(3), R, rep)
    assert J != g2_three_hamiltonian(g, 2, KS, KL, rep.twist_matrix)
    assert J == g2_three_hamiltonian(g, 2, KS, KL, rep.twist_matrix, long_weight=3)


def test_g2_three_short_only_agrees():
    # with k_l = 0 only the short terms survive, and those agree as displayed
    g, R = setup("I2R3", 6, KS, 0)
    rep = builtin_rep(g, "G2_three_spin", 2)
    assert mono.realize_reduced(sq(3), R, rep) == g2_three_hamiltonian(g, 2, KS, 0, rep.twist_matrix)


@pytest.mark.parametrize("m", [4, 6])
def test_i2m_orientation(m):
    g, R = setup("I2R2", m)
    rep = builtin_rep(g, "I2m_two_spin", 2)
    Q = rep.twist_matrix
    Qi = mono._local_power(Q, 2, m - 1)
    J = mono.realize_reduced(sq(2), R, rep)
    assert J != i2m_hamiltonian(g, 2, m, KS, KL, Q, Qi)
    assert J == i2m_hamiltonian(g, 2, m, KS, KL, Qi, Q)


def test_free_limits():
    for label, n in [("B", 2), ("I2R3", 6), ("I2R2", 6)]:
        g, R = setup(label, n, 0, 0)
        if label == "B":
            rep = builtin_rep(g, "BL_standard", 2)
            H = bl_standard_hamiltonian(g, 2, 0, 0, rep.twist_matrix)
        elif label == "I2R3":
            rep = builtin_rep(g, "G2_three_spin", 2)
            H = g2_three_hamiltonian(g, 2, 0, 0, rep.twist_matrix)
        else:
            rep = builtin_rep(g, "I2m_two_spin", 2)
            Q = rep.twist_matrix
            H = i2m_hamiltonian(g, 2, 6, 0, 0, Q, mono._local_power(Q, 2, 5))
        lap = laplacian(g, 2, rep.M)
        assert H == lap
        assert mono.realize_reduced(sq(g.dim), R, rep) == lap
