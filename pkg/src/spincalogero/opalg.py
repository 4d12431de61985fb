"""Rational functions with linear-form poles and differential-reflection operators.

An operator is kept in the normal form

    sum_{(w, beta)} f_{w,beta}(x) * d^beta * w^

(coefficient on the left, then a coordinate derivative multi-index, then the
group element), which is unique.  Composition uses

    w^ f = (w.f) w^,        w^ d_xi = d_{w xi} w^,        Leibniz for d o f,

where (w.f)(x) = f(w^-1 x).
"""

from __future__ import annotations

from math import comb

from .coxeter import Group, MultiplicityFunction, RootSystem, dot, reflection_matrix
from .poly import Poly, sub_indices
from .scalars import Cyclotomic, I, as_scalar

__all__ = [
    "InexactDivision",
    "NonConstantSymbol",
    "LinearForm",
    "RationalFunction",
    "NormalFormOperator",
    "dunkl_operator",
    "commutator",
    "equivariance_check",
    "apply_to_function",
    "principal_symbol",
    "group_act_function",
    "ratfunc_arith",
    "op_arith",
]


class InexactDivision(ArithmeticError):
    pass


class NonConstantSymbol(ValueError):
    pass


# linear forms ---------------------------------------------------------------

class LinearForm(tuple):
    """Coefficient vector of a nonzero linear form, first nonzero entry 1."""

    @classmethod
    def canonical(cls, coeffs) -> tuple["LinearForm", Cyclotomic]:
        """Return (form, lam) with coeffs = lam * form."""
        coeffs = [as_scalar(c) for c in coeffs]
        piv = next((i for i, c in enumerate(coeffs) if not c.is_zero()), None)
        if piv is None:
            raise ValueError("zero linear form")
        lam = coeffs[piv]
        if lam == 1:
            return cls(coeffs), lam
        inv = lam.inverse()
        return cls(c * inv for c in coeffs), lam

    @property
    def pivot(self) -> int:
        return next(i for i, c in enumerate(self) if not c.is_zero())

    def poly(self) -> Poly:
        p = _FORM_POLY.get(self)
        if p is None:
            p = Poly.linear(list(self))
            _FORM_POLY[self] = p
        return p

    def render(self) -> str:
        return self.poly().render()


_FORM_POLY: dict = {}


def _group_cache(group: Group, name: str) -> dict:
    caches = group.__dict__.setdefault("_op_caches", {})
    return caches.setdefault(name, {})


# rational functions -----------------------------------------------------------

def _cancel(num: Poly, den: dict) -> tuple[Poly, dict]:
    if num.is_zero():
        return num, {}
    if not den:
        return num, den
    out = {}
    for form, e in den.items():
        while e > 0:
            q = num.div_linear(list(form), form.pivot)
            if q is None:
                break
            num = q
            e -= 1
        if e:
            out[form] = e
    return num, out


class RationalFunction:
    """numerator / prod(form ** power), kept canonical (fully cancelled)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: dict | None = None, *, cancel: bool = True):
        den = dict(den or {})
        if cancel:
            num, den = _cancel(num, den)
        elif num.is_zero():
            den = {}
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def constant(cls, nvars: int, c) -> "RationalFunction":
        return cls(Poly.constant(nvars, c), {}, cancel=False)

    @classmethod
    def zero(cls, nvars: int) -> "RationalFunction":
        return cls(Poly.zero(nvars), {}, cancel=False)

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunction":
        return cls(p, {}, cancel=False)

    @classmethod
    def inverse_linear(cls, coeffs, power: int = 1, scale=1) -> "RationalFunction":
        """scale / (coeffs . x)**power."""
        form, lam = LinearForm.canonical(coeffs)
        c = as_scalar(scale) * lam.inverse() ** power
        return cls(Poly.constant(len(form), c), {form: power}, cancel=False)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return not self.den and self.num.is_constant()

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Cyclotomic)):
            return not self.den and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, frozenset(self.den.items())))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(self.nvars, other)
        return RationalFunction.sum([self, other])

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, cancel=False)

    def __sub__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction.constant(self.nvars, other)
        return RationalFunction.sum([self, -other])

    def scale(self, c) -> "RationalFunction":
        return RationalFunction(self.num.scale(c), self.den, cancel=False)

    def mul(self, other: "RationalFunction", cancel: bool = True) -> "RationalFunction":
        if self.is_zero() or other.is_zero():
            return RationalFunction.zero(self.nvars)
        den = dict(self.den)
        for f, e in other.den.items():
            den[f] = den.get(f, 0) + e
        return RationalFunction(self.num * other.num, den, cancel=cancel)

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    @staticmethod
    def sum(items, nvars: int | None = None) -> "RationalFunction":
        items = [f for f in items if not f.is_zero()]
        if not items:
            return RationalFunction.zero(nvars if nvars is not None else 0)
        if len(items) == 1:
            f = items[0]
            return RationalFunction(f.num, f.den)
        den: dict = {}
        for f in items:
            for form, e in f.den.items():
                if den.get(form, 0) < e:
                    den[form] = e
        acc = {}
        for f in items:
            num = f.num
            for form, e in den.items():
                missing = e - f.den.get(form, 0)
                if missing:
                    num = num * _form_power(form, missing)
            for m, c in num.terms.items():
                v = acc.get(m)
                acc[m] = c if v is None else v + c
        return RationalFunction(Poly(items[0].nvars, acc), den)

    def exact_div(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero():
            raise InexactDivision("division by zero")
        # self / other = self.num * other.den / (self.den * other.num)
        num = self.num
        for form, e in other.den.items():
            num = num * _form_power(form, e)
        divisor = other.num
        den = dict(self.den)
        if divisor.is_constant():
            return RationalFunction(num.scale(divisor.constant_term().inverse()), den)
        q = _poly_exact_div(num, divisor)
        if q is not None:
            return RationalFunction(q, den)
        if divisor.degree() == 1 and not divisor.constant_term():
            coeffs = [Cyclotomic.zero()] * divisor.nvars
            for m, c in divisor.terms.items():
                coeffs[m.index(1)] = c
            form, lam = LinearForm.canonical(coeffs)
            den[form] = den.get(form, 0) + 1
            return RationalFunction(num.scale(lam.inverse()), den)
        raise InexactDivision("quotient is not in the linear-pole class")

    # calculus and group action ---------------------------------------------
    def deriv(self, j: int, cancel: bool = True) -> "RationalFunction":
        n = self.nvars
        involved = [f for f in self.den if not f[j].is_zero()]
        if not involved:
            return RationalFunction(self.num.deriv(j), self.den, cancel=cancel)
        # d(N / prod l^e) = (N' prod l - N sum e c_j prod_{l' != l} l') / prod l^(e+1)
        prod_all = Poly.constant(n, 1)
        for f in involved:
            prod_all = prod_all * f.poly()
        num = self.num.deriv(j) * prod_all
        for f in involved:
            rest = Poly.constant(n, 1)
            for g in involved:
                if g is not f:
                    rest = rest * g.poly()
            num = num - (self.num * rest).scale(f[j] * self.den[f])
        den = dict(self.den)
        for f in involved:
            den[f] += 1
        return RationalFunction(num, den, cancel=cancel)

    def act(self, group: Group, w: int) -> "RationalFunction":
        """(w.f)(x) = f(w^-1 x)."""
        if w == 0 or self.is_zero():
            return self
        winv = group.matrix(group.inv(w))
        cache = _group_cache(group, "act")
        images = cache.get(w)
        if images is None:
            images = [Poly.linear(list(row)) for row in winv]
            cache[w] = images
        num = self.num.substitute(images)
        den = {}
        wm = group.matrix(w)
        for form, e in self.den.items():
            fkey = (w, form)
            hit = cache.get(fkey)
            if hit is None:
                # (c, w^-1 x) = (w c, x) for orthogonal w
                newc = [dot(row, form) for row in wm]
                hit = LinearForm.canonical(newc)
                cache[fkey] = hit
            nf, lam = hit
            den[nf] = den.get(nf, 0) + e
            if lam != 1:
                num = num.scale(lam.inverse() ** e)
        return RationalFunction(num, den, cancel=False)

    def evaluate(self, point) -> Cyclotomic:
        d = Cyclotomic.one()
        for form, e in self.den.items():
            d = d * form.poly().evaluate(point) ** e
        return self.num.evaluate(point) / d

    def render(self, names=None) -> str:
        n = self.num.render(names)
        if not self.den:
            return n
        parts = []
        for form in sorted(self.den, key=lambda f: f.render()):
            e = self.den[form]
            s = f"({form.poly().render(names)})"
            parts.append(s if e == 1 else f"{s}^{e}")
        return f"({n})/({'*'.join(parts)})"

    def __repr__(self):
        return f"RationalFunction({self.render()})"


_POW_CACHE: dict = {}


def _form_power(form: LinearForm, e: int) -> Poly:
    key = (form, e)
    p = _POW_CACHE.get(key)
    if p is None:
        p = form.poly() ** e
        _POW_CACHE[key] = p
    return p


def _poly_exact_div(num: Poly, div: Poly) -> Poly | None:
    """Multivariate exact division (lex order), None when not exact."""
    if div.is_zero():
        raise InexactDivision("division by zero")
    lead = max(div.terms)
    lc_inv = div.terms[lead].inverse()
    rem = num
    quot: dict = {}
    while not rem.is_zero():
        m = max(rem.terms)
        if any(a < b for a, b in zip(m, lead)):
            return None
        qm = tuple(a - b for a, b in zip(m, lead))
        qc = rem.terms[m] * lc_inv
        quot[qm] = qc
        rem = rem - div * Poly(num.nvars, {qm: qc}, _clean=True)
    return Poly(num.nvars, quot)


def ratfunc_arith(f: RationalFunction, g: RationalFunction, op: str) -> RationalFunction:
    if op == "add":
        return f + g
    if op == "mul":
        return f.mul(g)
    if op == "exact_div":
        return f.exact_div(g)
    raise ValueError(op)


def group_act_function(group: Group, w: int, f: RationalFunction) -> RationalFunction:
    g = f.act(group, w)
    return RationalFunction(g.num, g.den)


# operators ----------------------------------------------------------------------

def _transported_derivative(group: Group, w: int, beta: tuple) -> dict:
    """w^ d^beta w^-1 as {gamma: scalar} (constant-coefficient derivatives)."""
    cache = _group_cache(group, "diff")
    key = (w, beta)
    hit = cache.get(key)
    if hit is not None:
        return hit
    n = len(beta)
    if w == 0:
        out = {beta: Cyclotomic.one()}
    else:
        mat = group.matrix(w)
        p = Poly.constant(n, 1)
        for j, b in enumerate(beta):
            if b:
                # w^ d_j w^-1 = d_{w e_j} = sum_i w_ij d_i
                p = p * Poly.linear([mat[i][j] for i in range(n)]) ** b
        out = dict(p.terms)
    cache[key] = out
    return out


class NormalFormOperator:
    """Differential-reflection operator in normal form over a fixed group."""

    __slots__ = ("group", "nvars", "terms")

    def __init__(self, group: Group, terms: dict | None = None, *, _clean=False):
        self.group = group
        self.nvars = group.dim
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, group: Group) -> "NormalFormOperator":
        return cls(group, {}, _clean=True)

    @classmethod
    def identity(cls, group: Group, c=1) -> "NormalFormOperator":
        return cls.function(group, RationalFunction.constant(group.dim, c))

    @classmethod
    def function(cls, group: Group, f: RationalFunction) -> "NormalFormOperator":
        return cls(group, {(0, (0,) * group.dim): f})

    @classmethod
    def reflection(cls, group: Group, w: int, c=1) -> "NormalFormOperator":
        return cls(group, {(w, (0,) * group.dim): RationalFunction.constant(group.dim, c)})

    @classmethod
    def partial(cls, group: Group, j: int, c=1) -> "NormalFormOperator":
        beta = [0] * group.dim
        beta[j] = 1
        return cls(group, {(0, tuple(beta)): RationalFunction.constant(group.dim, c)})

    @classmethod
    def directional(cls, group: Group, xi, c=1) -> "NormalFormOperator":
        out = cls.zero(group)
        for j, x in enumerate(xi):
            x = as_scalar(x)
            if not x.is_zero():
                out = out + cls.partial(group, j, x * as_scalar(c))
        return out

    # queries ----------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, NormalFormOperator):
            return NotImplemented
        return self.terms == other.terms

    def max_order(self) -> int:
        return max((sum(b) for _, b in self.terms), default=-1)

    def group_support(self) -> set[int]:
        return {w for w, _ in self.terms}

    # arithmetic ----------------------------------------------------------------
    def __add__(self, other: "NormalFormOperator") -> "NormalFormOperator":
        out = dict(self.terms)
        for k, v in other.terms.items():
            if k in out:
                s = out[k] + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
            else:
                out[k] = v
        return NormalFormOperator(self.group, out, _clean=True)

    def __neg__(self):
        return NormalFormOperator(self.group, {k: -v for k, v in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "NormalFormOperator":
        c = as_scalar(c)
        if c.is_zero():
            return NormalFormOperator.zero(self.group)
        return NormalFormOperator(self.group, {k: v.scale(c) for k, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, NormalFormOperator):
            return self.compose(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def compose(self, other: "NormalFormOperator") -> "NormalFormOperator":
        g = self.group
        n = self.nvars
        acc: dict[tuple, list] = {}
        acted: dict = {}
        for (w1, b1), f1 in self.terms.items():
            for (w2, b2), f2 in other.terms.items():
                akey = (w1, w2, b2)
                g_f = acted.get(akey)
                if g_f is None:
                    g_f = {(0,) * n: f2.act(g, w1)}
                    acted[akey] = g_f
                trans = _transported_derivative(g, w1, b2)
                w = g.mul(w1, w2)
                for delta in sub_indices(b1):
                    dg = g_f.get(delta)
                    if dg is None:
                        dg = _partial_multi(g_f, delta)
                    if dg.is_zero():
                        continue
                    coef = binom_mult(b1, delta)
                    rest = tuple(b - d for b, d in zip(b1, delta))
                    prod = f1.mul(dg, cancel=False)
                    if coef != 1:
                        prod = prod.scale(coef)
                    for gamma, c in trans.items():
                        beta = tuple(r + x for r, x in zip(rest, gamma))
                        acc.setdefault((w, beta), []).append(prod.scale(c) if c != 1 else prod)
        out = {}
        for k, items in acc.items():
            s = RationalFunction.sum(items, n)
            if not s.is_zero():
                out[k] = s
        return NormalFormOperator(g, out, _clean=True)

    def conjugate_by(self, w: int) -> "NormalFormOperator":
        """w^ A w^-1."""
        g = self.group
        return NormalFormOperator.reflection(g, w).compose(self).compose(NormalFormOperator.reflection(g, g.inv(w)))

    def apply(self, phi: RationalFunction) -> RationalFunction:
        g = self.group
        items = []
        for (w, beta), f in self.terms.items():
            h = phi.act(g, w)
            for j, b in enumerate(beta):
                for _ in range(b):
                    h = h.deriv(j, cancel=False)
            items.append(f.mul(h, cancel=False))
        return RationalFunction.sum(items, self.nvars)

    def render(self, names=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (w, beta) in sorted(self.terms):
            f = self.terms[(w, beta)]
            d = "*".join(f"D{j + 1}^{b}" if b > 1 else f"D{j + 1}" for j, b in enumerate(beta) if b)
            gw = "" if w == 0 else f"*w{w}"
            parts.append(f"[{f.render(names)}]" + (f"*{d}" if d else "") + gw)
        return " + ".join(parts)

    def __repr__(self):
        return f"NormalFormOperator({len(self.terms)} terms)"


def _partial_multi(cache: dict, delta: tuple) -> RationalFunction:
    """Derivative d^delta of cache[(0,..)], memoised through lower multi-indices."""
    if delta in cache:
        return cache[delta]
    j = next(i for i, d in enumerate(delta) if d)
    lower = list(delta)
    lower[j] -= 1
    base = _partial_multi(cache, tuple(lower))
    out = base.deriv(j)
    cache[delta] = out
    return out


def binom_mult(beta, delta) -> int:
    out = 1
    for b, d in zip(beta, delta):
        out *= comb(b, d)
    return out


def op_arith(a: NormalFormOperator, b: NormalFormOperator, op: str) -> NormalFormOperator:
    if op == "add":
        return a + b
    if op == "compose":
        return a.compose(b)
    raise ValueError(op)


def commutator(a: NormalFormOperator, b: NormalFormOperator) -> NormalFormOperator:
    return a.compose(b) - b.compose(a)


def dunkl_operator(xi, rs: RootSystem, group: Group, k: MultiplicityFunction) -> NormalFormOperator:
    """d_xi = -i d_xi + i sum_{alpha>0} k(alpha) (alpha, xi)/(alpha, x) s_alpha^."""
    xi = [as_scalar(x) for x in xi]
    op = NormalFormOperator.directional(group, xi, -I)
    n = group.dim
    terms = dict(op.terms)
    for idx, alpha in enumerate(rs.positive_roots):
        kv = k(idx)
        if kv.is_zero():
            continue
        ax = dot(alpha, xi)
        if ax.is_zero():
            continue
        w = group.index(reflection_matrix(alpha))
        f = RationalFunction.inverse_linear(alpha, 1, I * kv * ax)
        key = (w, (0,) * n)
        terms[key] = terms[key] + f if key in terms else f
    return NormalFormOperator(group, terms)


def equivariance_check(group: Group, s: int, xi, rs: RootSystem, k: MultiplicityFunction) -> bool:
    """s^ d_xi s^-1 == d_{s(xi)} as normal forms."""
    lhs = dunkl_operator(xi, rs, group, k).conjugate_by(s)
    rhs = dunkl_operator(group.act(s, [as_scalar(x) for x in xi]), rs, group, k)
    return lhs == rhs


def apply_to_function(a: NormalFormOperator, phi: RationalFunction) -> RationalFunction:
    return a.apply(phi)


def principal_symbol(a: NormalFormOperator) -> Poly:
    """Top-order part with d_j -> y_j; top terms must sit on the identity with constant coefficients."""
    n = a.nvars
    top = a.max_order()
    if top < 0:
        return Poly.zero(n)
    out = {}
    for (w, beta), f in a.terms.items():
        if sum(beta) != top:
            continue
        if w != 0 or not f.is_constant():
            raise NonConstantSymbol("top-order part is not a constant-coefficient differential operator")
        out[beta] = f.num.constant_term()
    return Poly(n, out)
