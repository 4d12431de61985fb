"""Explicit spin Calogero Hamiltonians written with derivatives and spin matrices only.

Each builder returns a :class:`CombinedOperator` without group part, so it can
be compared with a reduced hierarchy element J Lambda directly.
"""

from __future__ import annotations

from itertools import permutations

from .coxeter import Group
from .opalg import RationalFunction
from .scalars import Cyclotomic, I, as_scalar, root_of_unity
from .spin import CombinedOperator, SpinMatrix, local, transposition

__all__ = [
    "laplacian",
    "potential_term",
    "bl_standard_hamiltonian",
    "bl_orbit_hamiltonian",
    "g2_six_hamiltonian",
    "g2_three_hamiltonian",
    "i2m_hamiltonian",
]


def laplacian(group: Group, N: int, M: int) -> CombinedOperator:
    """-sum_j d^2/dx_j^2 (x) identity."""
    n = group.dim
    ident = SpinMatrix.identity(N, M)
    terms = {}
    for j in range(n):
        beta = tuple(2 if i == j else 0 for i in range(n))
        terms[(0, beta)] = ident.map(lambda v: RationalFunction.constant(n, -as_scalar(v)))
    return CombinedOperator(group, N, M, terms)


def potential_term(group: Group, k, S: SpinMatrix, form, weight=1, sign=1) -> CombinedOperator:
    """weight * sign*(k - S) / form(x)^2 as a multiplication operator."""
    n = group.dim
    k = as_scalar(k)
    spin = SpinMatrix.identity(S.N, S.M).scale(k) - S
    if sign != 1:
        spin = spin.scale(sign)
    f = RationalFunction.inverse_linear(list(form), 2, weight)
    return CombinedOperator.from_spin(group, spin, f=f)


def _e(n, i, c=1):
    return [c if j == i else 0 for j in range(n)]


def bl_standard_hamiltonian(group: Group, N: int, k_s, k_l, Q) -> CombinedOperator:
    """Sites carry the particles; reflections through e_j act with Q_j."""
    L = group.dim
    M = L
    H = laplacian(group, N, M)
    for m, j in permutations(range(L), 2):
        Pmj = transposition(N, M, m + 1, j + 1)
        Qj = local(N, M, Q, j + 1)
        H = H + potential_term(group, k_l, Pmj, [a - b for a, b in zip(_e(L, m), _e(L, j))], k_l)
        H = H + potential_term(group, k_l, Qj @ Pmj @ Qj, [a + b for a, b in zip(_e(L, m), _e(L, j))], k_l)
    for j in range(L):
        H = H + potential_term(group, k_s, local(N, M, Q, j + 1), _e(L, j), k_s)
    return H


def bl_orbit_hamiltonian(group: Group, N: int, k_s, k_l) -> CombinedOperator:
    """Two spins per particle, sites ordered (1, 1bar, 2, 2bar, ...)."""
    L = group.dim
    M = 2 * L

    def s(j):
        return 2 * j + 1

    def sb(j):
        return 2 * j + 2

    H = laplacian(group, N, M)
    for m, j in permutations(range(L), 2):
        minus = transposition(N, M, s(m), s(j)) @ transposition(N, M, sb(m), sb(j))
        plus = transposition(N, M, s(m), sb(j)) @ transposition(N, M, sb(m), s(j))
        H = H + potential_term(group, k_l, minus, [a - b for a, b in zip(_e(L, m), _e(L, j))], k_l)
        H = H + potential_term(group, k_l, plus, [a + b for a, b in zip(_e(L, m), _e(L, j))], k_l)
    for j in range(L):
        H = H + potential_term(group, k_s, transposition(N, M, s(j), sb(j)), _e(L, j), k_s)
    return H


def _long_form(n, m, j):
    v = [0, 0, 0]
    v[n] = -2
    v[m] = 1
    v[j] = 1
    return v


def g2_six_hamiltonian(group: Group, N: int, k_s, k_l, long_weight=1) -> CombinedOperator:
    """Three particles, sites (1, 2, 3, 1bar, 2bar, 3bar).

    ``long_weight`` multiplies every long-root term; 1 is the displayed form.
    """
    M = 6

    def bar(i):
        return i + 4

    H = laplacian(group, N, M)
    for m, j in permutations(range(3), 2):
        S = transposition(N, M, m + 1, j + 1) @ transposition(N, M, bar(m), bar(j))
        H = H + potential_term(group, k_s, S, [a - b for a, b in zip(_e(3, m), _e(3, j))], k_s)
    for n, m, j in permutations(range(3), 3):
        S = transposition(N, M, n + 1, bar(n)) @ transposition(N, M, j + 1, bar(m)) @ transposition(
            N, M, m + 1, bar(j))
        H = H + potential_term(group, k_l, S, _long_form(n, m, j), as_scalar(k_l) * long_weight)
    return H


def g2_three_hamiltonian(group: Group, N: int, k_s, k_l, Q, long_weight=1) -> CombinedOperator:
    """Three particles and three spins with the twist Q."""
    M = 3
    H = laplacian(group, N, M)
    for m, j in permutations(range(3), 2):
        H = H + potential_term(group, k_s, transposition(N, M, m + 1, j + 1),
                               [a - b for a, b in zip(_e(3, m), _e(3, j))], k_s)
    for n, m, j in permutations(range(3), 3):
        S = transposition(N, M, m + 1, j + 1) @ local(N, M, Q, n + 1) @ local(N, M, Q, m + 1) @ local(
            N, M, Q, j + 1)
        H = H + potential_term(group, k_l, S, _long_form(n, m, j), as_scalar(k_l) * long_weight)
    return H


def i2m_hamiltonian(group: Group, N: int, m: int, k_s, k_l, Q, Qinv) -> CombinedOperator:
    """Two particles in the plane written through z = x1 + i x2.

    The kinetic part -d_z d_zbar is read with d = d_1 + i d_2, so it is minus
    the Laplacian.  Exponent e of tau = exp(2 pi i/m) carries k_s for even e and
    k_l for odd e; the potential is
    4i sum_e k_e tau^e (Q_1^-e P_12 Q_1^e - k_e) / (z - i tau^e zbar)^2.
    """
    M = 2
    H = laplacian(group, N, M)
    tau = root_of_unity(m, 1)
    P12 = transposition(N, M, 1, 2)
    for e in range(m):
        k = as_scalar(k_s if e % 2 == 0 else k_l)
        te = tau**e
        Qe = local(N, M, _power(Q, N, e), 1)
        Qie = local(N, M, _power(Qinv, N, e), 1)
        S = Qie @ P12 @ Qe
        # z - i tau^e zbar = (1 - i tau^e) x1 + (i - tau^e) x2
        form = [Cyclotomic.one() - I * te, I - te]
        weight = I * 4 * k * te
        H = H + potential_term(group, k, S, form, weight, sign=-1)
    return H


def _power(Q, N, e):
    rows = [[as_scalar(v) for v in row] for row in Q]
    out = [[Cyclotomic.one() if i == j else Cyclotomic.zero() for j in range(N)] for i in range(N)]
    for _ in range(e):
        out = [[sum((out[i][k] * rows[k][j] for k in range(N)), Cyclotomic.zero()) for j in range(N)]
               for i in range(N)]
    return out
