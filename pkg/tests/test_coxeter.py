from fractions import Fraction
from itertools import product

import pytest

from spincalogero.coxeter import (
    OrbitMismatch,
    UnsupportedFamily,
    ZeroRoot,
    assign_multiplicities,
    build_root_system,
    check_multiplicity,
    generate_group,
    induced_permutation,
    is_parallel,
    matmul,
    orbit,
    reflect,
    reflection_matrix,
    root_system_stable,
    simple_expansion_signs_ok,
    transpose,
    identity_matrix,
    vec,
    verify_presentation,
)
from spincalogero.scalars import root_of_unity

MODELS = [("B", 2), ("B", 3), ("I2R3", 6), ("I2R2", 6), ("I2R2", 4), ("I2R2", 5), ("A", 3)]


@pytest.fixture(scope="module", params=MODELS, ids=lambda p: f"{p[0]}{p[1]}")
def model(request):
    rs = build_root_system(*request.param)
    return rs, generate_group(rs)


def test_b2_roots():
    rs = build_root_system("B", 2)
    assert set(rs.positive_roots) == {vec(v) for v in [(1, -1), (1, 1), (1, 0), (0, 1)]}


def test_i2r3_roots():
    rs = build_root_system("I2R3", 6)
    assert len(rs.positive_roots) == 6
    assert vec((-2, 1, 1)) in rs.positive_roots


def test_i2r2_roots_parallel_to_listed():
    rs = build_root_system("I2R2", 6)
    o = rs.field_order
    s3 = root_of_unity(12, 1) + root_of_unity(12, 11)
    cot = (2 + s3).embed(o)  # cot(pi/12) = 2 + sqrt3
    wanted = [vec((1, 1), o), (vec((1, 0), o)[0], cot)]
    for w in wanted:
        assert any(is_parallel(w, a) for a in rs.positive_roots)
    assert len(rs.positive_roots) == 6


def test_unsupported():
    with pytest.raises(UnsupportedFamily):
        build_root_system("H", 3)
    with pytest.raises(UnsupportedFamily):
        build_root_system("I2R3", 5)


def test_reflect_examples():
    a = vec((1, -1))
    assert reflect(a, a) == vec((-1, 1))
    assert reflect(a, vec((1, 0))) == vec((0, 1))
    third = Fraction(1, 3)
    want = [[-1, 2, 2], [2, 2, -1], [2, -1, 2]]
    got = reflection_matrix(vec((-2, 1, 1)))
    assert got == tuple(tuple(vec([x * third for x in row])) for row in want)
    with pytest.raises(ZeroRoot):
        reflect(vec((0, 0)), vec((1, 0)))


@pytest.mark.parametrize("label,n,size", [("B", 2, 8), ("B", 3, 48), ("I2R3", 6, 12), ("I2R2", 6, 12),
                                          ("I2R2", 4, 8), ("A", 3, 6)])
def test_group_orders(label, n, size):
    assert len(generate_group(build_root_system(label, n))) == size


def test_group_properties(model):
    rs, g = model
    n = len(g)
    ident = identity_matrix(rs.ambient_dim)
    for i in range(n):
        m = g.matrix(i)
        assert matmul(transpose(m), m) == ident
    for i, j in product(range(n), repeat=2):
        assert g.find(matmul(g.matrix(i), g.matrix(j))) is not None
    assert root_system_stable(rs)
    assert simple_expansion_signs_ok(rs)
    assert all(ok for _, ok in verify_presentation(rs, g))


def test_no_parallel_roots(model):
    rs, _ = model
    roots = rs.positive_roots
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            assert not is_parallel(roots[i], roots[j])


def test_named_relations():
    rs = build_root_system("B", 3)
    report = dict(verify_presentation(rs, generate_group(rs)))
    assert report["(rt2)^4=1"]
    rs = build_root_system("I2R2", 6)
    report = dict(verify_presentation(rs, generate_group(rs)))
    assert report["ba=a^-1b"] and report["(tr)^6=1"]


def test_bl_orbit_permutations():
    L = 3
    rs = build_root_system("B", L)
    g = generate_group(rs)
    order = []
    for j in range(L):
        e = [0] * L
        e[j] = 1
        order += [tuple(e), tuple(-x for x in e)]
    orb = orbit(g, (1, 0, 0), order_override=order)
    assert len(orb) == 2 * L
    # index 2j is e_{j+1}, 2j+1 its negative
    assert induced_permutation(orb, g.named["r"]) == (0, 1, 2, 3, 5, 4)
    assert induced_permutation(orb, g.named["t1"]) == (2, 3, 0, 1, 4, 5)
    assert induced_permutation(orb, 0) == tuple(range(2 * L))


def test_orbit_homomorphism(model):
    rs, g = model
    mu = [1] + [0] * (rs.ambient_dim - 1)
    orb = orbit(g, mu)
    for w, v in product(range(len(g)), repeat=2):
        pw, pv = induced_permutation(orb, w), induced_permutation(orb, v)
        assert induced_permutation(orb, g.mul(w, v)) == tuple(pw[pv[i]] for i in range(len(orb)))


def test_g2_orbit_of_e1():
    g = generate_group(build_root_system("I2R3", 6))
    orb = orbit(g, (1, 0, 0))
    t = Fraction(1, 3)
    assert len(orb) == 6
    assert vec((-t, 2 * t, 2 * t)) in orb.points


def test_fixed_point_orbit(model):
    rs, g = model
    assert len(orbit(g, [0] * rs.ambient_dim)) == 1


def test_multiplicities():
    rs = build_root_system("B", 2)
    g = generate_group(rs)
    k = assign_multiplicities(rs, g, {0: Fraction(1, 2), 2: -2})
    assert check_multiplicity(rs, g, k)
    assert k(1) == Fraction(1, 2) and k(3) == -2
    with pytest.raises(OrbitMismatch):
        assign_multiplicities(rs, g, {0: 1, 1: 2, 2: 3})
    rs = build_root_system("I2R3", 6)
    g = generate_group(rs)
    k = assign_multiplicities(rs, g, {0: 1, 3: 5})
    assert [k(i) for i in range(6)] == [1, 1, 1, 5, 5, 5]
