from fractions import Fraction

import pytest

from spincalogero.coxeter import build_root_system, generate_group, model_multiplicities, orbit
from spincalogero.dalg import (
    DunklRealization,
    act_poly,
    conj,
    lift_spin,
    poly_symbol,
    reduced_product,
    scalar_spin,
    spin_scalar_part,
    sym,
)
from spincalogero.opalg import principal_symbol
from spincalogero.poly import Poly
from spincalogero.scalars import I
from spincalogero.spin import CombinedOperator, builtin_rep, orbit_rep, projector_lambda, reduce_operator, site_unit


@pytest.fixture(scope="module", params=["orbit", "standard"])
def setup(request):
    rs = build_root_system("B", 2)
    g = generate_group(rs)
    if request.param == "orbit":
        rep = orbit_rep(g, orbit(g, (1, 0)), 2)
    else:
        rep = builtin_rep(g, "BL_standard", 2)
    R = DunklRealization(rs, g, model_multiplicities(rs, g, Fraction(1, 2), -2))
    return g, rep, R, projector_lambda(g, rep).lam


def sample(rep, seed):
    """A spin matrix with polynomial entries that is not W-invariant."""
    y = [Poly.var(2, j) for j in range(2)]
    X = lift_spin(site_unit(2, rep.M, 0, 1, 1), 2).map(lambda p: p * y[seed % 2])
    X = X + lift_spin(site_unit(2, rep.M, 1, 1, rep.M), 2).map(lambda p: p * (y[0] * y[1] + y[1]))
    return X


def test_reduced_product_matches_composition(setup):
    g, rep, R, lam = setup
    X, Y = sample(rep, 0), sample(rep, 1)
    concrete = reduce_operator(R.spin(X).compose(lam).compose(R.spin(Y)), rep)
    assert concrete == R.spin(reduced_product(X, Y, g, rep))


def test_conj_matches_concrete(setup):
    g, rep, R, _ = setup
    X = sample(rep, 1)
    for name in sorted(g.named):
        w = g.named[name]
        W = CombinedOperator.from_spin(g, rep(w), w=w)
        Wi = CombinedOperator.from_spin(g, rep.inverse(w), w=g.inv(w))
        assert W.compose(R.spin(X)).compose(Wi) == R.spin(conj(X, g, rep, w))


def test_sym_is_invariant(setup):
    g, rep, R, _ = setup
    S = sym(sample(rep, 0), g, rep)
    for w in range(len(g)):
        assert conj(S, g, rep, w) == S


def test_act_poly_is_dunkl_equivariance(setup):
    g, rep, R, _ = setup
    p = Poly.var(2, 0) ** 2 * Poly.var(2, 1)
    for w in range(len(g)):
        lhs = R.poly(p).conjugate_by(w)
        assert lhs == R.poly(act_poly(g, w, p))


def test_scalar_round_trip():
    p = Poly.linear([1, 2])
    assert spin_scalar_part(scalar_spin(p, 2, 3)) == p
    X = lift_spin(site_unit(2, 2, 0, 1, 1), 2)
    assert spin_scalar_part(X) is None


def test_poly_symbol_matches_operator_symbol(setup):
    g, rep, R, _ = setup
    p = Poly.var(2, 0) ** 3 + Poly.var(2, 1) * Poly.var(2, 0) + Poly.constant(2, 4)
    assert poly_symbol(p) == principal_symbol(R.poly(p))
    assert poly_symbol(Poly.var(2, 1)) == Poly.var(2, 1, -I)
