"""Truncated monodromy series, inner twists and the relation checkers.

A monodromy coefficient is stored as a :class:`SpinMatrix` on M + 1 sites, the
physical sites 1..M followed by one auxiliary site, with entries that are
polynomials in the commuting Dunkl symbols y_1..y_L.  For two auxiliary copies
the physical sites are followed by a then b.  Every product is taken in the
image of the projector: (X Lambda)(Y Lambda) = X sym(Y) Lambda, so relation
checks are statements about B(u) Lambda, not about B(u) alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .coxeter import Group
from .dalg import (
    DunklRealization,
    conj,
    invariance,
    lift_spin,
    poly_symbol,
    scalar_spin,
    spin_scalar_part,
    sym,
)
from .linalg import rank, solve
from .poly import Poly
from .scalars import Cyclotomic, as_scalar, root_of_unity
from .spin import (
    CombinedOperator,
    InvalidTwistMatrix,
    SpinMatrix,
    SpinRepresentation,
    local,
    tensor_power,
    transposition,
)

__all__ = [
    "ShiftNotAllowed",
    "NonCommutingShift",
    "DegeneratePoint",
    "AuxSeries",
    "TwistData",
    "RelationReport",
    "build_monodromy",
    "apply_twist",
    "projector_path",
    "apply_shifted_twist",
    "check_symmetry",
    "check_two_paths",
    "check_halfloop",
    "check_twisted",
    "check_twisted_cleared",
    "check_intertwine",
    "trace_and_extract",
    "trace_polynomials",
    "check_hierarchy",
    "jacobian_rank",
    "in_subring",
    "check_independence",
    "greedy_independent",
    "build_complex_dunkl",
    "validate_shift",
]


class ShiftNotAllowed(ValueError):
    pass


class NonCommutingShift(ValueError):
    pass


class DegeneratePoint(ArithmeticError):
    pass


# auxiliary-space plumbing ----------------------------------------------------------

def _local_rows(Q, N):
    return [[as_scalar(v) for v in row] for row in Q]


def _local_mat(Q, N) -> SpinMatrix:
    return SpinMatrix(N, 1, {(r, c): v for r, row in enumerate(_local_rows(Q, N))
                             for c, v in enumerate(row)})


def _local_power(Q, N, k) -> list[list[Cyclotomic]]:
    m = _local_mat(Q, N).power(k)
    rows = [[Cyclotomic.zero() for _ in range(N)] for _ in range(N)]
    for (r, c), v in m.entries.items():
        rows[r][c] = v
    return rows


def _embed(X: SpinMatrix, which: str) -> SpinMatrix:
    """Move an (M+1)-site matrix with its auxiliary site last into the a or b slot of M+2 sites."""
    N = X.N
    out = {}
    if which == "a":
        for (r, c), v in X.entries.items():
            for x in range(N):
                out[(r * N + x, c * N + x)] = v
    else:
        for (r, c), v in X.entries.items():
            pr, ar = divmod(r, N)
            pc, ac = divmod(c, N)
            for x in range(N):
                out[((pr * N + x) * N + ar, (pc * N + x) * N + ac)] = v
    return SpinMatrix(N, X.M + 1, out, _clean=True)


def _kron_identity(S: SpinMatrix, extra: int) -> SpinMatrix:
    """S (x) identity on ``extra`` trailing sites."""
    if extra == 0:
        return S
    d = S.N**extra
    out = {}
    for (r, c), v in S.entries.items():
        for x in range(d):
            out[(r * d + x, c * d + x)] = v
    return SpinMatrix(S.N, S.M + extra, out, _clean=True)


class LiftedRep:
    """R_w acting on the physical sites, identity on trailing auxiliary sites."""

    def __init__(self, rep: SpinRepresentation, extra: int):
        self.rep = rep
        self.group = rep.group
        self.extra = extra
        self._fwd: dict = {}
        self._inv: dict = {}

    def __call__(self, w: int) -> SpinMatrix:
        hit = self._fwd.get(w)
        if hit is None:
            hit = self._fwd[w] = _kron_identity(self.rep(w), self.extra)
        return hit

    def inverse(self, w: int) -> SpinMatrix:
        hit = self._inv.get(w)
        if hit is None:
            hit = self._inv[w] = _kron_identity(self.rep.inverse(w), self.extra)
        return hit


def _lifted(rep, extra):
    if extra == 0:
        return rep
    cache = rep.__dict__.setdefault("_lifted", {})
    hit = cache.get(extra)
    if hit is None:
        hit = cache[extra] = LiftedRep(rep, extra)
    return hit


def _scale_poly(X: SpinMatrix, p: Poly) -> SpinMatrix:
    if p.is_zero():
        return SpinMatrix.zero(X.N, X.M)
    if p.is_constant():
        return X.scale(p.constant_term())
    return X.map(lambda q: q * p)


def partial_trace(X: SpinMatrix) -> SpinMatrix:
    """Trace over the last site."""
    N = X.N
    acc: dict = {}
    for (r, c), v in X.entries.items():
        pr, ar = divmod(r, N)
        pc, ac = divmod(c, N)
        if ar == ac:
            acc.setdefault((pr, pc), []).append(v)
    out = {}
    for key, items in acc.items():
        s = items[0]
        for v in items[1:]:
            s = s + v
        if not s.is_zero():
            out[key] = s
    return SpinMatrix(N, X.M - 1, out, _clean=True)


def aux_entry(X: SpinMatrix, i: int, j: int) -> SpinMatrix:
    """The (i, j) block with respect to the auxiliary (last) site."""
    N = X.N
    out = {}
    for (r, c), v in X.entries.items():
        pr, ar = divmod(r, N)
        pc, ac = divmod(c, N)
        if ar == i and ac == j:
            out[(pr, pc)] = v
    return SpinMatrix(N, X.M - 1, out, _clean=True)


# series and twists ------------------------------------------------------------------

@dataclass
class AuxSeries:
    """S(u) = sum_{n <= cutoff} coeffs[n] u^(-n-1)."""

    N: int
    M: int
    nvars: int
    coeffs: list
    sites: list | None = None
    label: str = ""

    @property
    def cutoff(self) -> int:
        return len(self.coeffs) - 1

    def entry(self, n: int, i: int, j: int) -> SpinMatrix:
        return aux_entry(self.coeffs[n], i, j)

    def realize(self, n: int, R: DunklRealization) -> list[list[CombinedOperator]]:
        """Aux entries of coefficient n as concrete combined operators."""
        return [[R.spin(self.entry(n, i, j)) for j in range(self.N)] for i in range(self.N)]


def _site_forms(sites, nvars):
    forms = []
    for s in sites:
        if isinstance(s, Poly):
            if s.degree() > 1 or not s.homogeneous_part(0).is_zero():
                raise ValueError("site forms must be linear and homogeneous")
            forms.append(s)
        else:
            vals = [as_scalar(v) for v in s]
            if len(vals) != nvars:
                raise ValueError("site vector has the wrong dimension")
            forms.append(Poly.linear(vals))
    return forms


def _site_projections(N: int, M: int) -> list[SpinMatrix]:
    return [transposition(N, M + 1, k, M + 1) for k in range(1, M + 1)]


def build_monodromy(sites, nvars: int, N: int, cutoff: int, signs=None, label: str = "T") -> AuxSeries:
    """T^(n) = sum_k P_{a k} l_k^n with l_k the linear form of site k.

    ``signs`` multiplies the k-th site term; any value other than 1 gives a
    deliberately corrupted monodromy.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    forms = _site_forms(sites, nvars)
    M = len(forms)
    P = _site_projections(N, M)
    if signs is not None:
        P = [p.scale(s) for p, s in zip(P, signs)]
    coeffs = []
    powers = [Poly.constant(nvars, 1)] * M
    for n in range(cutoff + 1):
        acc = SpinMatrix.zero(N, M + 1)
        for k in range(M):
            acc = acc + _scale_poly(lift_spin(P[k], nvars), powers[k])
        coeffs.append(acc)
        powers = [p * f for p, f in zip(powers, forms)]
    return AuxSeries(N, M, nvars, coeffs, [tuple(f.terms.items()) for f in forms], label)


@dataclass
class TwistData:
    """sigma on the auxiliary space with sigma^n = 1 and tau a primitive n-th root.

    Shifted twists carry one polynomial shift S_j per j and a centre C with
    S_j = C - tau^-j S' for a common S'; relations are then stated in u - C.
    """

    sigma: list
    order: int
    tau: Cyclotomic
    shifts: list | None = None
    weight: Fraction | Cyclotomic = None
    center: Poly | None = None
    pref: object = None
    label: str = ""
    sigma_inv: list = field(default=None, repr=False)

    def __post_init__(self):
        N = len(self.sigma)
        self.sigma = _local_rows(self.sigma, N)
        self.tau = as_scalar(self.tau)
        n = self.order
        if not _local_mat(self.sigma, N).power(n).is_identity():
            raise InvalidTwistMatrix(f"sigma^{n} is not the identity")
        if self.tau**n != 1 or any(self.tau**j == 1 for j in range(1, n)):
            raise InvalidTwistMatrix("tau is not a primitive root of the twist order")
        self.sigma_inv = _local_power(self.sigma, N, n - 1)
        if self.weight is None:
            self.weight = Fraction(1, n)
        self.weight = as_scalar(self.weight)
        if self.pref is None:
            self.pref = self.weight
        self.pref = as_scalar(self.pref)

    @property
    def N(self) -> int:
        return len(self.sigma)

    def sigma_power(self, j: int):
        return _local_power(self.sigma, self.N, j % self.order)

    @classmethod
    def plain(cls, sigma, order: int, label: str = "") -> "TwistData":
        return cls(sigma, order, root_of_unity(order, 1), label=label)


def _twisted_coefficient(T: AuxSeries, tw: TwistData, m: int) -> SpinMatrix:
    N, M = T.N, T.M
    acc = SpinMatrix.zero(N, M + 1)
    for j in range(tw.order):
        s = local(N, M + 1, tw.sigma_power(j), M + 1)
        si = local(N, M + 1, tw.sigma_power(-j), M + 1)
        term = lift_spin(s, T.nvars) @ T.coeffs[m] @ lift_spin(si, T.nvars)
        acc = acc + term.scale(tw.tau ** (-j * m))
    return acc.scale(tw.weight)


def apply_twist(T: AuxSeries, tw: TwistData) -> AuxSeries:
    """B^(m) = w sum_j tau^(-jm) sigma_a^j T^(m) sigma_a^-j (w = 1/n)."""
    if tw.shifts is not None:
        raise ShiftNotAllowed("use apply_shifted_twist for shifted twists")
    coeffs = [_twisted_coefficient(T, tw, m) for m in range(T.cutoff + 1)]
    return AuxSeries(T.N, T.M, T.nvars, coeffs, T.sites, "B")


def projector_path(T: AuxSeries, tw: TwistData) -> AuxSeries:
    """The same twist computed on the spin side: P_m applied to the generators.

    sigma_a^j P_ak sigma_a^-j = Sigma^-j P_ak Sigma^j with Sigma = sigma on every
    physical site, so the automorphism acts on the gl_N generators directly.
    """
    if tw.shifts is not None:
        raise ShiftNotAllowed("the projector path is defined for plain twists")
    N, M = T.N, T.M
    sig = [_kron_identity(tensor_power(tw.sigma_power(-j), N, M), 1) for j in range(tw.order)]
    sig_inv = [_kron_identity(tensor_power(tw.sigma_power(j), N, M), 1) for j in range(tw.order)]
    coeffs = []
    for m in range(T.cutoff + 1):
        acc = SpinMatrix.zero(N, M + 1)
        for j in range(tw.order):
            term = lift_spin(sig[j], T.nvars) @ T.coeffs[m] @ lift_spin(sig_inv[j], T.nvars)
            acc = acc + term.scale(tw.tau ** (-j * m))
        coeffs.append(acc.scale(tw.weight))
    return AuxSeries(N, M, T.nvars, coeffs, T.sites, "B")


def apply_shifted_twist(T: AuxSeries, tw: TwistData) -> AuxSeries:
    """B(u) = w sum_j tau^j sigma^j T(tau^j (u - S_j)) sigma^-j, expanded in u^-1.

    Coefficient n is w sum_j sigma^j [sum_k P_ak (S_j + tau^-j l_k)^n] sigma^-j;
    the expansion is legitimate because every S_j commutes with every l_k.
    """
    if T.sites is None:
        raise ValueError("shifted twists need the site forms of the monodromy")
    shifts = tw.shifts if tw.shifts is not None else [Poly.zero(T.nvars)] * tw.order
    if len(shifts) != tw.order:
        raise ValueError("one shift per power of sigma")
    for s in shifts:
        if isinstance(s, SpinMatrix) and spin_scalar_part(s) is None:
            raise NonCommutingShift("shift must be a scalar polynomial in the Dunkl symbols")
    shifts = [spin_scalar_part(s) if isinstance(s, SpinMatrix) else s for s in shifts]
    N, M, nv = T.N, T.M, T.nvars
    forms = [Poly(nv, dict(f)) for f in T.sites]
    P = [lift_spin(p, nv) for p in _site_projections(N, M)]
    coeffs = [SpinMatrix.zero(N, M + 1) for _ in range(T.cutoff + 1)]
    for j in range(tw.order):
        s = lift_spin(local(N, M + 1, tw.sigma_power(j), M + 1), nv)
        si = lift_spin(local(N, M + 1, tw.sigma_power(-j), M + 1), nv)
        args = [shifts[j] + f.scale(tw.tau ** (-j)) for f in forms]
        powers = [Poly.constant(nv, 1)] * M
        for n in range(T.cutoff + 1):
            inner = SpinMatrix.zero(N, M + 1)
            for k in range(M):
                inner = inner + _scale_poly(P[k], powers[k])
            coeffs[n] = coeffs[n] + s @ inner @ si
            powers = [p * a for p, a in zip(powers, args)]
    coeffs = [c.scale(tw.weight) for c in coeffs]
    return AuxSeries(N, M, nv, coeffs, T.sites, "Bhat")


def shift_offset(tw: TwistData, nvars: int) -> Poly:
    """S' with S_j = C - tau^-j S' for every j; raises when no such S' exists."""
    C = tw.center if tw.center is not None else Poly.zero(nvars)
    shifts = tw.shifts if tw.shifts is not None else [Poly.zero(nvars)] * tw.order
    offsets = [(C - shifts[j]).scale(tw.tau**j) for j in range(tw.order)]
    if any(o != offsets[0] for o in offsets[1:]):
        raise ValueError("shifts are not of the form C - tau^-j S'")
    return offsets[0]


# reports ----------------------------------------------------------------------------------

@dataclass
class RelationReport:
    name: str
    entries: list = field(default_factory=list)  # (params, status, defect)

    def add(self, params: dict, ok, defect: str = ""):
        status = ok if isinstance(ok, str) else ("pass" if ok else "fail")
        self.entries.append((params, status, "" if status == "pass" else defect))

    @property
    def passed(self) -> bool:
        return all(s == "pass" for _, s, _ in self.entries)

    @property
    def status(self) -> str:
        if any(s == "fail" for _, s, _ in self.entries):
            return "fail"
        if any(s != "pass" for _, s, _ in self.entries):
            return next(s for _, s, _ in self.entries if s != "pass")
        return "pass"

    def failures(self) -> list:
        return [e for e in self.entries if e[1] != "pass"]

    def summary_defect(self, limit: int = 600) -> str:
        bad = self.failures()
        if not bad:
            return ""
        params, status, defect = bad[0]
        head = f"{len(bad)} of {len(self.entries)} not passing; first at {params}: "
        text = head + (defect or status)
        return text if len(text) <= limit else text[:limit] + " ..."


def _render_defect(X: SpinMatrix, limit: int = 400) -> str:
    text = X.render()
    return text if len(text) <= limit else text[:limit] + " ..."


# relation checks ------------------------------------------------------------------------------

class _Pair:
    """Two auxiliary copies of a series, with reduced products cached."""

    def __init__(self, S: AuxSeries, rep):
        self.S = S
        self.rep = _lifted(rep, 2) if rep is not None else None
        self.group = rep.group if rep is not None else None
        self._a: dict = {}
        self._b: dict = {}
        self._sym: dict = {}
        self.P = lift_spin(transposition(S.N, S.M + 2, S.M + 1, S.M + 2), S.nvars)

    def a(self, n):
        hit = self._a.get(n)
        if hit is None:
            hit = self._a[n] = _embed(self.S.coeffs[n], "a")
        return hit

    def b(self, n):
        hit = self._b.get(n)
        if hit is None:
            hit = self._b[n] = _embed(self.S.coeffs[n], "b")
        return hit

    def sym(self, X, key):
        if self.rep is None:
            return X
        hit = self._sym.get(key)
        if hit is None:
            hit = self._sym[key] = sym(X, self.group, self.rep)
        return hit

    def product(self, X, kx, Y, ky):
        """(X Lambda)(Y Lambda) in reduced form."""
        return X @ self.sym(Y, ky)

    def commutator_ab(self, m, n):
        return self.product(self.a(m), ("a", m), self.b(n), ("b", n)) - self.product(
            self.b(n), ("b", n), self.a(m), ("a", m))


def _spin_commutator(X, Pj):
    return X @ Pj - Pj @ X


def check_halfloop(T: AuxSeries, order_budget: int, rep: SpinRepresentation | None = None,
                   name: str = "halfloop") -> RelationReport:
    """[T_a(u), T_b(v)] = [T_a(u) + T_b(v), P_ab/(u - v)] with 1/(u-v) = sum v^n u^(-n-1).

    At u^(-m-1) v^(-n-1): [T_a^(m), T_b^(n)] = [T_b^(m+n), P_ab].
    At u^(-m-1) v^s, s >= 0: [T_a^(q) + T_b^(q), P_ab] = 0 with q = m - 1 - s.
    """
    tw = TwistData.plain([[1 if i == j else 0 for j in range(T.N)] for i in range(T.N)], 1)
    return check_twisted(T, tw, order_budget, rep, name=name)


def check_twisted(B: AuxSeries, tw: TwistData, order_budget: int,
                  rep: SpinRepresentation | None = None, name: str = "twisted") -> RelationReport:
    """[B_a(u), B_b(v)] = p sum_j [tau^j B_a(u) + B_b(v), sigma_b^j P sigma_b^-j / (u - tau^j v)].

    p is the relation prefactor of the twist (1/n for the plain twist).
    """
    if tw.shifts is not None and any(not s.is_zero() for s in tw.shifts):
        raise ShiftNotAllowed("use check_twisted_cleared for shifted twists")
    pair = _Pair(B, rep)
    N, M, nv = B.N, B.M, B.nvars
    K = B.cutoff
    Pj = []
    for j in range(tw.order):
        s = lift_spin(local(N, M + 2, tw.sigma_power(j), M + 2), nv)
        si = lift_spin(local(N, M + 2, tw.sigma_power(-j), M + 2), nv)
        Pj.append(s @ pair.P @ si)
    comm_cache: dict = {}

    def cP(which, q, j):
        key = (which, q, j)
        hit = comm_cache.get(key)
        if hit is None:
            X = pair.a(q) if which == "a" else pair.b(q)
            hit = comm_cache[key] = _spin_commutator(X, Pj[j])
        return hit

    rep_out = RelationReport(name)
    for total in range(order_budget + 1):
        for m in range(total + 1):
            n = total - m
            params = {"m": m, "n": n}
            if total > K:
                rep_out.add(params, "unverified: budget")
                continue
            lhs = pair.commutator_ab(m, n)
            rhs = SpinMatrix.zero(N, M + 2)
            for j in range(tw.order):
                rhs = rhs + cP("b", m + n, j).scale(tw.tau ** (j * m))
            rhs = rhs.scale(tw.pref)
            diff = lhs - rhs
            rep_out.add(params, diff.is_zero(), _render_defect(diff))
    # nonnegative powers of v
    for m in range(1, order_budget + 1):
        for s in range(m):
            q = m - 1 - s
            params = {"m": m, "v_power": s}
            if q > K:
                rep_out.add(params, "unverified: budget")
                continue
            acc = SpinMatrix.zero(N, M + 2)
            for j in range(tw.order):
                acc = acc + cP("a", q, j).scale(tw.tau ** (j * (s + 1)))
                acc = acc + cP("b", q, j).scale(tw.tau ** (j * m))
            acc = acc.scale(tw.pref)
            rep_out.add(params, acc.is_zero(), _render_defect(acc))
    return rep_out


def _binom_poly(C: Poly, e: int, nv: int) -> dict:
    """(u - C)^e as {power of u: central coefficient}."""
    return {i: (-C) ** (e - i) * Poly.constant(nv, comb(e, i)) if e - i else Poly.constant(nv, comb(e, i))
            for i in range(e + 1)}


def check_twisted_cleared(B: AuxSeries, tw: TwistData, order_budget: int,
                          rep: SpinRepresentation | None = None, pref=None,
                          name: str = "twisted_cleared") -> RelationReport:
    """Shifted twisted relation with denominators cleared.

    With u' = u - C and v' = v - C:
    (u'^n - v'^n) [B_a(u), B_b(v)]
        = p sum_j [tau^j B_a(u) + B_b(v), sigma_b^j P sigma_b^-j] sum_r u'^(n-1-r) (tau^j v')^r.
    Every monomial u^A v^B whose order n - A - B - 2 is within the budget is
    compared; a monomial needing a coefficient beyond the cutoff is unverified.
    """
    pair = _Pair(B, rep)
    N, M, nv = B.N, B.M, B.nvars
    K = B.cutoff
    n = tw.order
    C = tw.center if tw.center is not None else Poly.zero(nv)
    p = as_scalar(tw.pref if pref is None else pref)
    Pj = []
    for j in range(n):
        s = lift_spin(local(N, M + 2, tw.sigma_power(j), M + 2), nv)
        si = lift_spin(local(N, M + 2, tw.sigma_power(-j), M + 2), nv)
        Pj.append(s @ pair.P @ si)
    upow = {e: _binom_poly(C, e, nv) for e in range(n + 1)}
    # multiplier on the left: u'^n - v'^n
    lmul: dict = {}
    for i, c in upow[n].items():
        lmul[(i, 0)] = lmul.get((i, 0), Poly.zero(nv)) + c
        lmul[(0, i)] = lmul.get((0, i), Poly.zero(nv)) - c
    lmul = {k: v for k, v in lmul.items() if not v.is_zero()}
    # per-j multipliers on the right: sum_r tau^(jr) u'^(n-1-r) v'^r
    rmul = []
    for j in range(n):
        acc: dict = {}
        for r in range(n):
            for iu, cu in upow[n - 1 - r].items():
                for iv, cv in upow[r].items():
                    acc[(iu, iv)] = acc.get((iu, iv), Poly.zero(nv)) + (cu * cv).scale(tw.tau ** (j * r))
        rmul.append({k: v for k, v in acc.items() if not v.is_zero()})
    comm: dict = {}
    cP: dict = {}

    def C_ab(pu, pv):
        key = (pu, pv)
        hit = comm.get(key)
        if hit is None:
            hit = comm[key] = pair.commutator_ab(pu, pv)
        return hit

    def C_P(which, q, j):
        key = (which, q, j)
        hit = cP.get(key)
        if hit is None:
            X = pair.a(q) if which == "a" else pair.b(q)
            hit = cP[key] = _spin_commutator(X, Pj[j])
        return hit

    report = RelationReport(name)
    lo = -order_budget - 2
    for A in range(lo, n + 1):
        for Bv in range(lo, n + 1):
            order = n - A - Bv - 2
            if order < 0 or order > order_budget:
                continue
            need = []
            lhs_terms = []
            for (e, f), c in lmul.items():
                pu, pv = e - A - 1, f - Bv - 1
                if pu >= 0 and pv >= 0:
                    need.append(max(pu, pv))
                    lhs_terms.append((c, pu, pv))
            rhs_terms = []
            for j in range(n):
                for (e, f), c in rmul[j].items():
                    # B_a(u) contributes at v^0 of its own series
                    if f == Bv and e - A - 1 >= 0:
                        q = e - A - 1
                        need.append(q)
                        rhs_terms.append((c.scale(tw.tau**j), "a", q, j))
                    if e == A and f - Bv - 1 >= 0:
                        q = f - Bv - 1
                        need.append(q)
                        rhs_terms.append((c, "b", q, j))
            if not lhs_terms and not rhs_terms:
                continue
            params = {"u": A, "v": Bv}
            if need and max(need) > K:
                report.add(params, "unverified: budget")
                continue
            lhs = SpinMatrix.zero(N, M + 2)
            for c, pu, pv in lhs_terms:
                lhs = lhs + _scale_poly(C_ab(pu, pv), c)
            rhs = SpinMatrix.zero(N, M + 2)
            for c, which, q, j in rhs_terms:
                rhs = rhs + _scale_poly(C_P(which, q, j), c)
            diff = lhs - rhs.scale(p)
            report.add(params, diff.is_zero(), _render_defect(diff))
    return report


def check_symmetry(B: AuxSeries, tw: TwistData, name: str = "symmetry") -> RelationReport:
    """B(u) = tau^j sigma^j B(tau^j u) sigma^-j, i.e. B^(m) = tau^(-jm) sigma^j B^(m) sigma^-j."""
    N, M, nv = B.N, B.M, B.nvars
    report = RelationReport(name)
    for j in range(1, tw.order):
        s = lift_spin(local(N, M + 1, tw.sigma_power(j), M + 1), nv)
        si = lift_spin(local(N, M + 1, tw.sigma_power(-j), M + 1), nv)
        for m in range(B.cutoff + 1):
            diff = B.coeffs[m] - (s @ B.coeffs[m] @ si).scale(tw.tau ** (-j * m))
            report.add({"j": j, "n": m}, diff.is_zero(), _render_defect(diff))
    return report


def check_two_paths(T: AuxSeries, tw: TwistData, name: str = "projector_paths") -> RelationReport:
    """apply_twist and the spin-side projector formula give identical coefficients."""
    B1 = apply_twist(T, tw)
    B2 = projector_path(T, tw)
    report = RelationReport(name)
    for m in range(T.cutoff + 1):
        diff = B1.coeffs[m] - B2.coeffs[m]
        report.add({"n": m}, diff.is_zero(), _render_defect(diff))
    return report


def check_intertwine(B: AuxSeries, rep: SpinRepresentation, strong: bool = False,
                     name: str = "intertwine") -> RelationReport:
    """g^ R_g B^(n) Lambda = B^(n) Lambda for every named generator g.

    In reduced form the left side is conj_g(B^(n)) Lambda, so the identity is
    conj_g(B^(n)) = B^(n); for coefficients without group part this is also
    the full commutation g^ R_g B^(n) = B^(n) g^ R_g, which ``strong`` records.
    """
    group = rep.group
    lifted = _lifted(rep, 1)
    report = RelationReport(name)
    for n in range(B.cutoff + 1):
        for gname in sorted(group.named):
            g = group.named[gname]
            moved = conj(B.coeffs[n], group, lifted, g)
            diff = moved - B.coeffs[n]
            params = {"generator": gname, "n": n}
            if strong:
                params["full_commutation"] = True
            report.add(params, diff.is_zero(), _render_defect(diff))
    return report


# hierarchy ------------------------------------------------------------------------------------

def trace_and_extract(B: AuxSeries) -> list[SpinMatrix]:
    """J_n = Tr_a B^(n); the projector is implicit (every element is read as X Lambda)."""
    return [partial_trace(c) for c in B.coeffs]


def trace_polynomials(B: AuxSeries) -> list[Poly | None]:
    """Scalar parts of the traced coefficients (None where a coefficient is not spin-trivial)."""
    return [spin_scalar_part(J) if not J.is_zero() else Poly.zero(B.nvars) for J in trace_and_extract(B)]


def check_hierarchy(Js: list[SpinMatrix], B: AuxSeries, rep: SpinRepresentation,
                    name: str = "hierarchy") -> RelationReport:
    """[J_m Lambda, J_n Lambda] = 0 and [J_m Lambda, B^(n) Lambda] = 0 for all m, n."""
    group = rep.group
    r0 = rep
    r1 = _lifted(rep, 1)
    report = RelationReport(name)
    symJ = [sym(J, group, r0) for J in Js]
    symB = [sym(c, group, r1) for c in B.coeffs]
    for m, n in itertools.combinations_with_replacement(range(len(Js)), 2):
        diff = Js[m] @ symJ[n] - Js[n] @ symJ[m]
        report.add({"pair": "J,J", "m": m, "n": n}, diff.is_zero(), _render_defect(diff))
    for m in range(len(Js)):
        Jl = _kron_identity(Js[m], 1)
        Jls = _kron_identity(symJ[m], 1)
        for n in range(B.cutoff + 1):
            diff = Jl @ symB[n] - B.coeffs[n] @ Jls
            report.add({"pair": "J,B", "m": m, "n": n}, diff.is_zero(), _render_defect(diff))
    return report


# independence ------------------------------------------------------------------------------------

def sample_points(nvars: int, count: int = 12, seed=None):
    """Deterministic schedule: (1, 2, ..., L) then (1, b, b^2, ...) for b = 2, 3, ...

    A ``seed`` point, when given, is tried first.
    """
    if seed is not None:
        if len(seed) != nvars:
            raise DegeneratePoint(f"seed point needs {nvars} coordinates")
        yield tuple(seed)
    yield tuple(range(1, nvars + 1))
    for b in range(2, count + 1):
        yield tuple(b**i for i in range(nvars))


def jacobian_rank(polys: list[Poly], point) -> int:
    nv = polys[0].nvars if polys else len(point)
    rows = [[p.deriv(j).evaluate(point) for j in range(nv)] for p in polys]
    return rank(rows) if rows else 0


def generic_rank(polys: list[Poly], attempts: int = 3, seed=None) -> int:
    """Largest Jacobian rank over the first ``attempts`` sample points.

    The rank is maximal on a Zariski-open set; three consecutive points of
    equal deficient rank are accepted as evidence of genuine dependence.
    """
    if not polys:
        return 0
    nv = polys[0].nvars
    best = 0
    full = min(len(polys), nv)
    for i, pt in enumerate(sample_points(nv, seed=seed)):
        if i >= attempts:
            break
        best = max(best, jacobian_rank(polys, pt))
        if best == full:
            break
    return best


def _products(gens: list[Poly], max_deg: int):
    """All monomials in the generators of total y-degree <= max_deg, with exponents."""
    degs = [g.degree() for g in gens]
    if any(d <= 0 for d in degs):
        raise DegeneratePoint("generators must be nonconstant")
    out = []

    def rec(i, exps, deg):
        if i == len(gens):
            out.append(tuple(exps))
            return
        e = 0
        while deg + e * degs[i] <= max_deg:
            rec(i + 1, exps + [e], deg + e * degs[i])
            e += 1

    rec(0, [], 0)
    return out


def in_subring(candidate: Poly, gens: list[Poly]):
    """Coefficients c with candidate = sum c_e prod g_i^e_i, or None.

    The products are restricted to y-degree at most deg(candidate), which is
    exact for homogeneous data and a sufficient certificate otherwise.
    """
    nv = candidate.nvars
    exps = _products(gens, max(candidate.degree(), 0))
    prods = []
    for e in exps:
        p = Poly.constant(nv, 1)
        for g, k in zip(gens, e):
            if k:
                p = p * g**k
        prods.append(p)
    monos = sorted({m for p in prods + [candidate] for m in p.terms})
    matrix = [[p.terms.get(m, Cyclotomic.zero()) for p in prods] for m in monos]
    rhs = [candidate.terms.get(m, Cyclotomic.zero()) for m in monos]
    sol = solve(matrix, rhs)
    if sol is None:
        return None
    return {e: c for e, c in zip(exps, sol) if not c.is_zero()}


def greedy_independent(polys: list[Poly], seed=None) -> list[int]:
    """Indices accepted by a left-to-right walk that keeps the Jacobian rank growing."""
    chosen: list[int] = []
    current = 0
    for i, p in enumerate(polys):
        if p is None or p.is_zero() or p.is_constant():
            continue
        r = generic_rank([polys[c] for c in chosen] + [p], seed=seed)
        if r > current:
            chosen.append(i)
            current = r
    return chosen


def check_independence(polys: list[Poly], generators: list[int], expect_rank: int | None = None,
                       name: str = "independence") -> RelationReport:
    """Jacobian rank of the declared generators (the Dunkl-symbol polynomials)."""
    gens = [polys[i] for i in generators]
    r = generic_rank(gens)
    want = len(gens) if expect_rank is None else expect_rank
    report = RelationReport(name)
    report.add({"generators": list(generators), "rank": r}, r == want,
               f"Jacobian rank {r}, expected {want}")
    return report


# complex Dunkl operators -------------------------------------------------------------------------

def build_complex_dunkl(R: DunklRealization):
    """d = d_1 + i d_2 and dbar = d_1 - i d_2 on a two-dimensional model."""
    if R.nvars != 2:
        raise ValueError("complex Dunkl operators need ambient dimension 2")
    i = as_scalar(Cyclotomic(4, (0, 1)))
    d = R.basis[0] + R.basis[1].scale(i)
    db = R.basis[0] - R.basis[1].scale(i)
    return d, db


def complex_symbols(nvars: int = 2) -> tuple[Poly, Poly]:
    i = Cyclotomic(4, (0, 1))
    return Poly.linear([1, i]), Poly.linear([1, -i])


def validate_shift(shift: Poly, R: DunklRealization) -> bool:
    """The realized shift commutes with every coordinate Dunkl operator."""
    S = R.poly(shift)
    for dj in R.basis:
        if not (S.compose(dj) - dj.compose(S)).is_zero():
            raise NonCommutingShift("shift does not commute with the Dunkl operators")
    return True


def symbols_of(polys: list[Poly]) -> list[Poly]:
    return [poly_symbol(p) if p is not None else None for p in polys]


def scalar(p: Poly, N: int, M: int) -> SpinMatrix:
    return scalar_spin(p, N, M)


def realize_reduced(p: Poly, R: DunklRealization, rep: SpinRepresentation) -> CombinedOperator:
    """p(d) Lambda in reduced form: every w^ traded for R_w^-1."""
    from .spin import reduce_operator

    op = R.poly(p)
    return reduce_operator(CombinedOperator.from_position(op, rep.N, rep.M), rep)


def generator_invariance(X: SpinMatrix, group: Group, rep) -> list[tuple[str, bool]]:
    return invariance(X, group, rep)
