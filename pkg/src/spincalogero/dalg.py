"""Spin-valued polynomials in commuting Dunkl symbols.

The Dunkl operators d_1..d_L commute, so y_j -> d_{e_j} extends to an algebra
map from C[y] (x) End(spin) into combined operators.  Group elements act by
w^ p(d) = (w.p)(d) w^ with (w.p)(y_j) = sum_i w_ij y_i, and the projector
relation w^ Lambda = R_w^-1 Lambda turns every product with Lambda on the
right into an element without group part.  Such reduced elements are
canonical: X Lambda = Y Lambda iff X = Y.

Elements here are :class:`~spincalogero.spin.SpinMatrix` instances whose
entries are :class:`~spincalogero.poly.Poly` in the symbols y.
"""

from __future__ import annotations

from fractions import Fraction

from .coxeter import Group, MultiplicityFunction, RootSystem
from .opalg import NormalFormOperator, RationalFunction, dunkl_operator
from .poly import Poly
from .scalars import Cyclotomic, I, as_scalar
from .spin import CombinedOperator, SpinMatrix, SpinRepresentation

__all__ = [
    "scalar_spin",
    "spin_scalar_part",
    "lift_spin",
    "act_poly",
    "conj",
    "invariance",
    "sym",
    "reduced_product",
    "reduced_commutator",
    "poly_symbol",
    "DunklRealization",
]


def scalar_spin(p: Poly, N: int, M: int) -> SpinMatrix:
    """p times the spin identity."""
    if p.is_zero():
        return SpinMatrix.zero(N, M)
    return SpinMatrix(N, M, {(i, i): p for i in range(N**M)}, _clean=True)


def spin_scalar_part(X: SpinMatrix) -> Poly | None:
    """The polynomial p when X = p * identity, else None."""
    d = X.dim
    if len(X.entries) != d:
        return None
    p = X.entries.get((0, 0))
    if p is None:
        return None
    for i in range(d):
        if X.entries.get((i, i)) != p:
            return None
    return p


def lift_spin(S: SpinMatrix, nvars: int) -> SpinMatrix:
    """Numeric spin matrix as a constant polynomial matrix."""
    return S.map(lambda v: Poly.constant(nvars, v))


def _images(group: Group, w: int) -> list[Poly]:
    caches = group.__dict__.setdefault("_op_caches", {})
    cache = caches.setdefault("symbol_act", {})
    hit = cache.get(w)
    if hit is None:
        mat = group.matrix(w)
        n = group.dim
        hit = [Poly.linear([mat[i][j] for i in range(n)]) for j in range(n)]
        cache[w] = hit
    return hit


def act_poly(group: Group, w: int, p: Poly) -> Poly:
    """w.p, defined by w^ p(d) w^-1 = (w.p)(d)."""
    if w == 0 or p.is_constant():
        return p
    return p.substitute(_images(group, w))


def conj(X: SpinMatrix, group: Group, rep: SpinRepresentation, w: int) -> SpinMatrix:
    """(w^ R_w) X (w^ R_w)^-1 for X without group part."""
    if w == 0:
        return X
    memo: dict = {}

    def act(p):
        q = memo.get(p)
        if q is None:
            q = act_poly(group, w, p)
            memo[p] = q
        return q

    moved = X.map(act)
    return rep(w) @ moved @ rep.inverse(w)


def invariance(X: SpinMatrix, group: Group, rep: SpinRepresentation) -> list[tuple[str, bool]]:
    """Per named generator g: does g^ R_g commute with X?"""
    return [(name, conj(X, group, rep, group.named[name]) == X) for name in sorted(group.named)]


def sym(X: SpinMatrix, group: Group, rep: SpinRepresentation) -> SpinMatrix:
    """(1/|W|) sum_w (w^ R_w) X (w^ R_w)^-1, so that Lambda X Lambda = sym(X) Lambda.

    When every generator fixes X, so does every group element and sym(X) = X.
    """
    if all(ok for _, ok in invariance(X, group, rep)):
        return X
    acc = SpinMatrix.zero(X.N, X.M)
    for w in range(len(group)):
        acc = acc + conj(X, group, rep, w)
    return acc.scale(Cyclotomic.from_fraction(Fraction(1, len(group))))


def reduced_product(X: SpinMatrix, Y: SpinMatrix, group: Group, rep: SpinRepresentation) -> SpinMatrix:
    """Reduced form of (X Lambda)(Y Lambda)."""
    return X @ sym(Y, group, rep)


def reduced_commutator(X: SpinMatrix, Y: SpinMatrix, group: Group, rep: SpinRepresentation) -> SpinMatrix:
    return reduced_product(X, Y, group, rep) - reduced_product(Y, X, group, rep)


def poly_symbol(p: Poly) -> Poly:
    """Principal symbol of p(d): top homogeneous part with d_j -> -i y_j."""
    deg = p.degree()
    if deg < 0:
        return p
    top = p.homogeneous_part(deg)
    return top.scale((-I) ** deg)


class DunklRealization:
    """Evaluate symbol polynomials on concrete Dunkl operators."""

    def __init__(self, rs: RootSystem, group: Group, k: MultiplicityFunction):
        self.rs = rs
        self.group = group
        self.k = k
        n = group.dim
        self.nvars = n
        self.basis = [
            dunkl_operator([1 if i == j else 0 for i in range(n)], rs, group, k) for j in range(n)
        ]
        self._mono: dict = {(0,) * n: NormalFormOperator.identity(group)}

    def monomial(self, exps: tuple) -> NormalFormOperator:
        hit = self._mono.get(exps)
        if hit is not None:
            return hit
        j = next(i for i, e in enumerate(exps) if e)
        lower = list(exps)
        lower[j] -= 1
        out = self.monomial(tuple(lower)).compose(self.basis[j])
        self._mono[exps] = out
        return out

    def poly(self, p: Poly) -> NormalFormOperator:
        out = NormalFormOperator.zero(self.group)
        for m in sorted(p.terms):
            out = out + self.monomial(m).scale(p.terms[m])
        return out

    def spin(self, X: SpinMatrix) -> CombinedOperator:
        """sum_(r,c) E_rc (x) X_rc(d) as a combined operator."""
        g = self.group
        by_mono: dict = {}
        for key, p in X.entries.items():
            for m, c in p.terms.items():
                by_mono.setdefault(m, {})[key] = c
        terms: dict = {}
        for m in sorted(by_mono):
            op = self.monomial(m)
            coeffs = by_mono[m]
            for tkey, f in op.terms.items():
                bucket = terms.setdefault(tkey, {})
                for key, c in coeffs.items():
                    bucket.setdefault(key, []).append(f.scale(c))
        out = {}
        for tkey, bucket in terms.items():
            entries = {}
            for key, items in bucket.items():
                s = RationalFunction.sum(items, self.nvars)
                if not s.is_zero():
                    entries[key] = s
            if entries:
                out[tkey] = SpinMatrix(X.N, X.M, entries, _clean=True)
        return CombinedOperator(g, X.N, X.M, out, _clean=True)

    def vector(self, xi) -> NormalFormOperator:
        """d_xi for a possibly complex direction xi."""
        out = NormalFormOperator.zero(self.group)
        for j, c in enumerate(xi):
            c = as_scalar(c)
            if not c.is_zero():
                out = out + self.basis[j].scale(c)
        return out
