"""Sparse multivariate polynomials over cyclotomic fields."""

from __future__ import annotations

from fractions import Fraction
from itertools import product as _iproduct
from math import comb

from .scalars import Cyclotomic, as_scalar

Monomial = tuple[int, ...]

# products of larger polynomials recur constantly in monodromy expansions
_MUL_MEMO: dict = {}
_MEMO_LIMIT = 200_000
_MEMO_THRESHOLD = 16


def _add_exp(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Poly:
    """Polynomial in ``nvars`` commuting variables.

    ``terms`` maps exponent tuples to nonzero :class:`Cyclotomic` values.
    Instances are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: dict | None = None, *, _clean: bool = False):
        self.nvars = nvars
        self._hash = None
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {m: c for m, c in terms.items() if not c.is_zero()}

    # constructors --------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars, {}, _clean=True)

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        c = as_scalar(c)
        if c.is_zero():
            return cls.zero(nvars)
        return cls(nvars, {(0,) * nvars: c}, _clean=True)

    @classmethod
    def var(cls, nvars: int, i: int, coeff=1) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): as_scalar(coeff)})

    @classmethod
    def linear(cls, coeffs) -> "Poly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = as_scalar(c)
            if not c.is_zero():
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls(n, terms, _clean=True)

    # queries -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_term(self) -> Cyclotomic:
        return self.terms.get((0,) * self.nvars, Cyclotomic.zero())

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d}, _clean=True)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self == Poly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # arithmetic ----------------------------------------------------------
    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v.is_zero():
                    del out[m]
                else:
                    out[m] = v
        return Poly(self.nvars, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = as_scalar(c)
        if c.is_zero():
            return Poly.zero(self.nvars)
        if c == 1:
            return self
        return Poly(self.nvars, {m: v * c for m, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.nvars)
        if len(self.terms) * len(other.terms) >= _MEMO_THRESHOLD:
            key = (self, other)
            hit = _MUL_MEMO.get(key)
            if hit is None:
                hit = self._mul(other)
                if len(_MUL_MEMO) > _MEMO_LIMIT:
                    _MUL_MEMO.clear()
                _MUL_MEMO[key] = hit
            return hit
        return self._mul(other)

    def _mul(self, other: "Poly") -> "Poly":
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _add_exp(m1, m2)
                v = c1 * c2
                w = out.get(m)
                out[m] = v if w is None else w + v
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # calculus / substitution ---------------------------------------------
    def deriv(self, j: int) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            e = m[j]
            if e:
                mm = list(m)
                mm[j] -= 1
                out[tuple(mm)] = c * e
        return Poly(self.nvars, out, _clean=True)

    def substitute(self, images: list["Poly"]) -> "Poly":
        """Replace variable i by ``images[i]`` (all images share nvars)."""
        nv = images[0].nvars if images else 0
        powers: list[dict[int, Poly]] = [dict() for _ in images]

        def pw(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = images[i] ** e
            return cache[e]

        out = Poly.zero(nv)
        acc: dict = {}
        for m, c in self.terms.items():
            term = Poly.constant(nv, c)
            for i, e in enumerate(m):
                if e:
                    term = term * pw(i, e)
            for mm, v in term.terms.items():
                w = acc.get(mm)
                acc[mm] = v if w is None else w + v
        out = Poly(nv, acc)
        return out

    def linear_substitute(self, matrix) -> "Poly":
        """x_i -> sum_j matrix[i][j] x_j."""
        images = [Poly.linear(row) for row in matrix]
        return self.substitute(images)

    def evaluate(self, point) -> Cyclotomic:
        total = Cyclotomic.zero()
        pts = [as_scalar(p) for p in point]
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pts, m):
                if e:
                    v = v * x**e
            total = total + v
        return total

    def div_linear(self, coeffs, pivot: int) -> "Poly | None":
        """Exact quotient by l = x_pivot + sum_{j>pivot} coeffs[j] x_j, or None.

        ``coeffs[pivot]`` must be 1.
        """
        if not self.terms:
            return self
        n = self.nvars
        # r = l - x_pivot
        rest = Poly.linear([c if j != pivot else 0 for j, c in enumerate(coeffs)])
        # group by power of x_pivot
        by_power: dict[int, dict] = {}
        for m, c in self.terms.items():
            k = m[pivot]
            mm = list(m)
            mm[pivot] = 0
            by_power.setdefault(k, {})[tuple(mm)] = c
        top = max(by_power)
        if top == 0:
            return None
        a = {k: Poly(n, t, _clean=True) for k, t in by_power.items()}
        # synthetic division by (x_p + r): b_{k-1} = a_k - r*b_k
        b: dict[int, Poly] = {}
        prev = Poly.zero(n)
        for k in range(top, 0, -1):
            cur = a.get(k, Poly.zero(n)) - rest * prev
            b[k - 1] = cur
            prev = cur
        remainder = a.get(0, Poly.zero(n)) - rest * prev
        if not remainder.is_zero():
            return None
        out: dict = {}
        for k, p in b.items():
            for m, c in p.terms.items():
                mm = list(m)
                mm[pivot] = k
                out[tuple(mm)] = c
        return Poly(n, out, _clean=True)

    # text ----------------------------------------------------------------
    def render(self, names=None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = "*".join(
                (names[i] if e == 1 else f"{names[i]}^{e}") for i, e in enumerate(m) if e
            )
            cs = str(c)
            if not mono:
                parts.append(f"({cs})" if " " in cs else cs)
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}" if " " in cs else f"{cs}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self.render()})"


def monomials_of_degree(nvars: int, d: int):
    """All exponent tuples of total degree exactly d, in lexicographic order."""
    if nvars == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - first):
            yield (first,) + rest


def multinomial_expand(coeffs, power: int, nvars: int) -> dict:
    """Coefficients of (sum_i coeffs[i] y_i)^power as a dict."""
    return (Poly.linear(coeffs) ** power).terms


def binom_tuple(beta, delta) -> int:
    out = 1
    for b, d in zip(beta, delta):
        out *= comb(b, d)
    return out


def sub_indices(beta):
    return _iproduct(*(range(b + 1) for b in beta))
