"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A :class:`Cyclotomic` stores an element of Q(zeta_n) in the power basis
``1, z, ..., z^(phi(n)-1)`` reduced modulo the n-th cyclotomic polynomial.
Coefficients are kept as a tuple of integers over one common positive
denominator, which is much cheaper than a tuple of ``Fraction`` objects.

Rationals are the order-1 field.  Binary operations between different
orders first embed both operands into Q(zeta_lcm).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

__all__ = [
    "Cyclotomic",
    "InvalidScalar",
    "NonDivisibleOrder",
    "root_of_unity",
    "rational",
    "as_scalar",
    "parse_scalar",
    "field_arith",
    "embed",
    "cyclotomic_polynomial",
    "ZERO",
    "ONE",
    "I",
]


class InvalidScalar(ArithmeticError):
    pass


class NonDivisibleOrder(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("order must be positive")
    # x^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d:
            continue
        den = cyclotomic_polynomial(d)
        num = _poly_exact_div(num, list(den))
    return tuple(num)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]  # den is monic
        out[k - dd] = c
        if c:
            for j in range(dd + 1):
                num[k - dd + j] -= c * den[j]
    assert not any(num[:dd]), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def _phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row e is z^e reduced mod Phi_n, for 0 <= e < max(2*phi-1, n)."""
    phi = _phi(n)
    poly = cyclotomic_polynomial(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(max(2 * phi - 1, n, 1)):
        rows.append(tuple(cur))
        # multiply by z
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * poly[j]
    return tuple(rows)


def _normalize(num, den: int):
    if den < 0:
        num = [-c for c in num]
        den = -den
    g = den
    for c in num:
        if c:
            g = gcd(g, c)
            if g == 1:
                break
    if g != 1:
        num = [c // g for c in num]
        den //= g
    return tuple(num), den


class Cyclotomic:
    """Immutable element of Q(zeta_order)."""

    __slots__ = ("order", "num", "den", "_hash")

    def __init__(self, order: int, num, den: int = 1, *, _reduced: bool = False):
        self.order = order
        if _reduced:
            self.num = num
            self.den = den
        else:
            if den == 0:
                raise InvalidScalar("zero denominator")
            num = list(num)
            phi = _phi(order)
            if len(num) > phi:
                num = _reduce_long(order, num)
            elif len(num) < phi:
                num = num + [0] * (phi - len(num))
            self.num, self.den = _normalize(num, den)
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def from_fraction(cls, q, order: int = 1) -> "Cyclotomic":
        q = Fraction(q)
        num = [0] * _phi(order)
        num[0] = q.numerator
        return cls(order, tuple(num), q.denominator, _reduced=True)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise InvalidScalar(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    # embedding -----------------------------------------------------------
    def embed(self, m: int) -> "Cyclotomic":
        if m == self.order:
            return self
        if m % self.order:
            raise NonDivisibleOrder(f"order {self.order} does not divide {m}")
        step = m // self.order
        table = _power_table(m)
        phi = _phi(m)
        out = [0] * phi
        for j, c in enumerate(self.num):
            if c:
                row = table[(j * step) % m]
                for t in range(phi):
                    if row[t]:
                        out[t] += c * row[t]
        return Cyclotomic(m, out, self.den)

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.order == self.order:
                return self, other
            m = _lcm(self.order, other.order)
            return self.embed(m), other.embed(m)
        if isinstance(other, (int, Fraction)):
            return self, Cyclotomic.from_fraction(other, self.order)
        return None, None

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a.den == b.den:
            num = [x + y for x, y in zip(a.num, b.num)]
            return Cyclotomic(a.order, num, a.den)
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return Cyclotomic(a.order, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, tuple(-c for c in self.num), self.den, _reduced=True)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Cyclotomic.zero(self.order)
            return Cyclotomic(self.order, [c * other for c in self.num], self.den)
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        n = a.order
        an, bn = a.num, b.num
        phi = len(an)
        if phi == 1:
            return Cyclotomic(n, (an[0] * bn[0],), a.den * b.den)
        prod = [0] * (2 * phi - 1)
        for i, x in enumerate(an):
            if x:
                for j, y in enumerate(bn):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic(n, _reduce_long(n, prod), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise InvalidScalar("inverse of zero")
        n = self.order
        phi = len(self.num)
        if phi == 1:
            return Cyclotomic(n, (self.den,), self.num[0])
        # Solve (self * y = 1) as a phi x phi rational linear system.
        table = _power_table(n)
        cols = []
        for j in range(phi):
            # column j: self * z^j
            col = [0] * phi
            for i, c in enumerate(self.num):
                if c:
                    row = table[i + j]
                    for t in range(phi):
                        col[t] += c * row[t]
            cols.append(col)
        mat = [[Fraction(cols[j][t]) for j in range(phi)] for t in range(phi)]
        rhs = [Fraction(0)] * phi
        rhs[0] = Fraction(self.den)
        sol = _solve_fraction(mat, rhs)
        den = 1
        for q in sol:
            den = _lcm(den, q.denominator)
        return Cyclotomic(n, [int(q * den) for q in sol], den)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise InvalidScalar("division by zero")
            other = Cyclotomic.from_fraction(other, self.order)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.one(self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation z -> z^-1."""
        n = self.order
        table = _power_table(n)
        phi = len(self.num)
        out = [0] * phi
        for j, c in enumerate(self.num):
            if c:
                row = table[(-j) % n]
                for t in range(phi):
                    if row[t]:
                        out[t] += c * row[t]
        return Cyclotomic(n, out, self.den)

    def __complex__(self):
        import cmath

        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(c * z**j for j, c in enumerate(self.num)) / self.den

    # comparison ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            if other.order == self.order:
                return self.den == other.den and self.num == other.num
            a, b = self._coerce(other)
            return a.den == b.den and a.num == b.num
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        # normalized trace is invariant under field embeddings
        if self._hash is None:
            if self.order == 1:
                n = self.num[0]
                self._hash = hash(n) if self.den == 1 else hash(Fraction(n, self.den))
            else:
                self._hash = hash(_normalized_trace(self))
        return self._hash

    @staticmethod
    def zero(order: int = 1) -> "Cyclotomic":
        return Cyclotomic(order, (0,) * _phi(order), 1, _reduced=True)

    @staticmethod
    def one(order: int = 1) -> "Cyclotomic":
        return Cyclotomic.from_fraction(1, order)

    # text ----------------------------------------------------------------
    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Cyclotomic({render(self)!r})"


def _reduce_long(n: int, coeffs) -> list[int]:
    phi = _phi(n)
    table = _power_table(n)
    out = list(coeffs[:phi]) + [0] * max(0, phi - len(coeffs))
    for e in range(phi, len(coeffs)):
        c = coeffs[e]
        if c:
            row = table[e] if e < len(table) else _power_table_row(n, e)
            for t in range(phi):
                if row[t]:
                    out[t] += c * row[t]
    return out


def _power_table_row(n: int, e: int):
    return _power_table(n)[e % n]


def _mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def _ramanujan_weights(n: int) -> tuple[Fraction, ...]:
    # normalized trace of z^j: mu(n/g)/phi(n/g), g = gcd(n, j)
    out = []
    for j in range(_phi(n)):
        q = n // gcd(n, j)
        out.append(Fraction(_mobius(q), _phi(q)))
    return tuple(out)


def _normalized_trace(x: Cyclotomic) -> Fraction:
    w = _ramanujan_weights(x.order)
    return sum((c * w[j] for j, c in enumerate(x.num) if c), Fraction(0)) / x.den


def _solve_fraction(mat, rhs):
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


# module-level helpers -----------------------------------------------------

def root_of_unity(n: int, k: int = 1) -> Cyclotomic:
    """zeta_n^k in Q(zeta_n)."""
    if n < 1:
        raise ValueError("n must be positive")
    row = _power_table(n)[k % n]
    return Cyclotomic(n, row, 1, _reduced=True)


def rational(q, order: int = 1) -> Cyclotomic:
    return Cyclotomic.from_fraction(q, order)


def as_scalar(x, order: int = 1) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return Cyclotomic.from_fraction(x, order)


def embed(a: Cyclotomic, m: int) -> Cyclotomic:
    return a.embed(m)


def field_arith(a: Cyclotomic, b: Cyclotomic | None, op: str) -> Cyclotomic:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


ZERO = Cyclotomic.zero(1)
ONE = Cyclotomic.one(1)
I = root_of_unity(4, 1)


def render(x: Cyclotomic) -> str:
    """Canonical text form, e.g. ``3/2 + 1/2*z12^2``."""
    terms = []
    for j, c in enumerate(x.num):
        if not c:
            continue
        q = Fraction(c, x.den)
        if j == 0:
            terms.append(str(q))
            continue
        mono = f"z{x.order}" if j == 1 else f"z{x.order}^{j}"
        if q == 1:
            terms.append(mono)
        elif q == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{q}*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


_TERM = re.compile(r"^(?:(?P<coef>[0-9]+(?:/[0-9]+)?)(?:\*)?)?(?:z(?P<order>[0-9]+)(?:\^(?P<exp>[0-9]+))?)?$")


def parse_scalar(text: str) -> Cyclotomic:
    """Inverse of :func:`render`; also accepts plain rationals like ``-3/4``."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    pieces = re.findall(r"[+-]?[^+-]+", s)
    total = Cyclotomic.zero(1)
    for piece in pieces:
        sign = -1 if piece.startswith("-") else 1
        body = piece.lstrip("+-")
        m = _TERM.match(body)
        if not m or not body:
            raise ValueError(f"cannot parse scalar term {piece!r}")
        coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
        if m.group("order"):
            term = root_of_unity(int(m.group("order")), int(m.group("exp") or 1)) * coef
        else:
            if not m.group("coef"):
                raise ValueError(f"cannot parse scalar term {piece!r}")
            term = Cyclotomic.from_fraction(coef)
        total = total + term * sign
    return total
