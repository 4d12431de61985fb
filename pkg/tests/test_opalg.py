from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spincalogero.coxeter import build_root_system, generate_group, model_multiplicities, reflection_matrix, vec
from spincalogero.opalg import (
    InexactDivision,
    NonConstantSymbol,
    NormalFormOperator,
    RationalFunction,
    apply_to_function,
    commutator,
    dunkl_operator,
    equivariance_check,
    group_act_function,
    op_arith,
    principal_symbol,
    ratfunc_arith,
)
from spincalogero.poly import Poly
from spincalogero.scalars import I

K_POINTS = [(0, 0), (1, 1), (Fraction(1, 2), -2)]


@pytest.fixture(scope="module")
def b2():
    rs = build_root_system("B", 2)
    return rs, generate_group(rs)


def x(n, j):
    return RationalFunction.from_poly(Poly.var(n, j))


def inv(coeffs, power=1, c=1):
    return RationalFunction.inverse_linear(coeffs, power, c)


def test_rational_examples():
    assert ratfunc_arith(inv([1, -1]), inv([-1, 1]), "add").is_zero()
    num = RationalFunction.from_poly(Poly.var(2, 0) ** 2 - Poly.var(2, 1) ** 2)
    den = RationalFunction.from_poly(Poly.linear([1, -1]))
    assert ratfunc_arith(num, den, "exact_div") == RationalFunction.from_poly(Poly.linear([1, 1]))
    assert ratfunc_arith(inv([1, 0]), inv([1, 0]), "mul") == inv([1, 0], 2)
    # x1 / (x1 - x2) stays in the linear-pole class; x1 / (x1^2 + x2^2) does not
    assert ratfunc_arith(RationalFunction.from_poly(Poly.var(2, 0)), den, "exact_div") == inv([1, -1], 1) * x(2, 0)
    circle = RationalFunction.from_poly(Poly.var(2, 0) ** 2 + Poly.var(2, 1) ** 2)
    with pytest.raises(InexactDivision):
        ratfunc_arith(RationalFunction.from_poly(Poly.var(2, 0)), circle, "exact_div")


def test_group_action_on_functions(b2):
    rs, g = b2
    s1 = g.index(reflection_matrix(vec((1, 0))))
    s12 = g.index(reflection_matrix(vec((1, -1))))
    assert group_act_function(g, s1, inv([1, 0])) == inv([1, 0], 1, -1)
    assert group_act_function(g, s12, inv([1, -1])) == inv([1, -1], 1, -1)
    f = inv([1, 1], 2, 3)
    assert group_act_function(g, 0, f) == f


def test_composition_examples(b2):
    rs, g = b2
    d1 = NormalFormOperator.partial(g, 0)
    X1 = NormalFormOperator.function(g, x(2, 0))
    assert op_arith(d1, X1, "compose") == X1.compose(d1) + NormalFormOperator.identity(g)
    s1 = g.index(reflection_matrix(vec((1, 0))))
    A = NormalFormOperator.function(g, inv([1, 0])).compose(NormalFormOperator.reflection(g, s1))
    assert A.compose(A) == NormalFormOperator.function(g, inv([1, 0], 2, -1))
    s12 = g.index(reflection_matrix(vec((1, -1))))
    S = NormalFormOperator.reflection(g, s12)
    assert S.compose(d1) == NormalFormOperator.partial(g, 1).compose(S)


def test_simple_commutators(b2):
    rs, g = b2
    d1, d2 = NormalFormOperator.partial(g, 0), NormalFormOperator.partial(g, 1)
    assert commutator(d1, d2).is_zero()
    assert commutator(d1, NormalFormOperator.function(g, x(2, 0))) == NormalFormOperator.identity(g)


def _models():
    for label, n in [("B", 2), ("B", 3), ("I2R3", 6), ("I2R2", 6)]:
        rs = build_root_system(label, n)
        yield rs, generate_group(rs)


MODELS = list(_models())


@pytest.mark.parametrize("idx", range(len(MODELS)), ids=lambda i: MODELS[i][0].group_label)
@pytest.mark.parametrize("ks,kl", K_POINTS)
def test_dunkl_commute_and_equivariant(idx, ks, kl):
    rs, g = MODELS[idx]
    k = model_multiplicities(rs, g, ks, kl)
    n = g.dim
    basis = [tuple(1 if i == j else 0 for i in range(n)) for j in range(n)]
    ds = [dunkl_operator(e, rs, g, k) for e in basis]
    for a, b in combinations(ds, 2):
        assert commutator(a, b).is_zero()
    for name in g.generator_names:
        for e in basis:
            assert equivariance_check(g, g.generators[name], e, rs, k)


def test_free_dunkl(b2):
    rs, g = b2
    k = model_multiplicities(rs, g, 0, 0)
    assert dunkl_operator((1, 0), rs, g, k) == NormalFormOperator.partial(g, 0, -I)


def test_bl_dunkl_term_count():
    rs = build_root_system("B", 3)
    g = generate_group(rs)
    d = dunkl_operator((0, 1, 0), rs, g, model_multiplicities(rs, g, 1, 2))
    reflections = [key for key in d.terms if key[0] != 0]
    assert len(reflections) == 2 * (3 - 1) + 1


def test_named_equivariance(b2):
    rs, g = b2
    k = model_multiplicities(rs, g, Fraction(1, 2), 3)
    d2 = dunkl_operator((0, 1), rs, g, k)
    assert d2.conjugate_by(g.named["r"]) == d2.scale(-1)
    d1 = dunkl_operator((1, 0), rs, g, k)
    assert d1.conjugate_by(g.named["t1"]) == d2
    assert equivariance_check(g, 0, (1, 0), rs, k)


def test_apply_examples(b2):
    rs, g = b2
    ks, kl = Fraction(1, 2), Fraction(-2)
    k = model_multiplicities(rs, g, ks, kl)
    d1 = dunkl_operator((1, 0), rs, g, k)
    one = RationalFunction.constant(2, 1)
    want = inv([1, -1], 1, I * kl) + inv([1, 1], 1, I * kl) + inv([1, 0], 1, I * ks)
    assert apply_to_function(d1, one) == want
    assert apply_to_function(NormalFormOperator.partial(g, 0, -I), x(2, 0)) == RationalFunction.constant(2, -I)
    d2 = dunkl_operator((0, 1), rs, g, k)
    mono = RationalFunction.from_poly(Poly.var(2, 0) * Poly.var(2, 1) ** 2)
    assert apply_to_function(commutator(d1, d2), mono).is_zero()


def test_principal_symbols(b2):
    rs, g = b2
    k = model_multiplicities(rs, g, 1, 1)
    d = [dunkl_operator(e, rs, g, k) for e in [(1, 0), (0, 1)]]
    assert principal_symbol(d[1]) == Poly.var(2, 1, -I)
    lap = d[0].compose(d[0]) + d[1].compose(d[1])
    assert principal_symbol(lap) == -(Poly.var(2, 0) ** 2 + Poly.var(2, 1) ** 2)
    assert principal_symbol(NormalFormOperator.identity(g, 5)) == Poly.constant(2, 5)
    with pytest.raises(NonConstantSymbol):
        principal_symbol(NormalFormOperator.function(g, x(2, 0)).compose(NormalFormOperator.partial(g, 0)))


# property checks on random short words ------------------------------------------------------------

def _pool():
    rs, g = MODELS[0]
    k = model_multiplicities(rs, g, Fraction(1, 2), 3)
    return g, [
        dunkl_operator((1, 0), rs, g, k),
        dunkl_operator((1, -1), rs, g, k),
        NormalFormOperator.partial(g, 1, 2),
        NormalFormOperator.function(g, x(2, 0)),
        NormalFormOperator.function(g, inv([1, 1], 1, 3)),
        NormalFormOperator.reflection(g, g.named["r"]),
        NormalFormOperator.reflection(g, g.named["t1"], -1),
    ]


POOL_GROUP, POOL = _pool()
word = st.lists(st.integers(0, len(POOL) - 1), min_size=2, max_size=4)


@settings(max_examples=25, deadline=None)
@given(word, st.integers(1, 3))
def test_rebracketing(ws, cut):
    ops = [POOL[i] for i in ws]
    cut = min(cut, len(ops) - 1)

    def left(seq):
        out = seq[0]
        for o in seq[1:]:
            out = out.compose(o)
        return out

    def right(seq):
        out = seq[-1]
        for o in reversed(seq[:-1]):
            out = o.compose(out)
        return out

    split = left(ops[:cut]).compose(right(ops[cut:]))
    assert left(ops) == right(ops) == split


polys = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), min_size=1, max_size=4)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, len(POOL) - 1), st.integers(0, len(POOL) - 1), polys)
def test_apply_matches_compose(i, j, terms):
    p = Poly.constant(2, 1)
    for a, b, c in terms:
        p = p + (Poly.var(2, 0) ** a * Poly.var(2, 1) ** b).scale(c)
    phi = RationalFunction(p)
    A, B = POOL[i], POOL[j]
    assert apply_to_function(A.compose(B), phi) == apply_to_function(A, apply_to_function(B, phi))
