"""Spin space (C^N)^{(x)M}, representations of W on it, and position-spin operators.

Basis states of the spin space are encoded as integers in base N with site 1
as the most significant digit.  Sites are numbered from 1 in the public API.
"""

from __future__ import annotations

from fractions import Fraction

from .coxeter import Group, Orbit, RootSystem, presentation_relations
from .opalg import (
    NormalFormOperator,
    RationalFunction,
    _partial_multi,
    _transported_derivative,
    binom_mult,
)
from .poly import sub_indices
from .scalars import Cyclotomic, as_scalar, root_of_unity

__all__ = [
    "IndexOutOfRange",
    "InvalidTwistMatrix",
    "RelationFailure",
    "ShapeMismatch",
    "SpinMatrix",
    "encode_state",
    "decode_state",
    "site_matrices",
    "default_twist_matrix",
    "SpinRepresentation",
    "orbit_rep",
    "builtin_rep",
    "CombinedOperator",
    "Projector",
    "projector_lambda",
    "partial_projector",
    "reduce_operator",
    "combined_arith",
]


class IndexOutOfRange(IndexError):
    pass


class InvalidTwistMatrix(ValueError):
    pass


class RelationFailure(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


# generic ring helpers -------------------------------------------------------

def _ring_mul(a, b):
    if isinstance(a, RationalFunction) and isinstance(b, RationalFunction):
        return a.mul(b, cancel=False)
    return a * b


def _ring_sum(items):
    first = items[0]
    if isinstance(first, RationalFunction):
        return RationalFunction.sum(items, first.nvars)
    acc = first
    for x in items[1:]:
        acc = acc + x
    return acc


def encode_state(states, N: int) -> int:
    idx = 0
    for s in states:
        idx = idx * N + s
    return idx


def decode_state(idx: int, N: int, M: int) -> tuple[int, ...]:
    out = [0] * M
    for i in range(M - 1, -1, -1):
        idx, out[i] = divmod(idx, N)
    return tuple(out)


class SpinMatrix:
    """Sparse N^M x N^M matrix.

    Entries may be cyclotomic scalars, polynomials or rational functions; all
    that is needed is a ring with ``+``, ``*`` and ``is_zero``.
    """

    __slots__ = ("N", "M", "entries", "_rows")

    def __init__(self, N: int, M: int, entries: dict | None = None, *, _clean: bool = False):
        self.N = N
        self.M = M
        if entries is None:
            self.entries = {}
        elif _clean:
            self.entries = entries
        else:
            self.entries = {k: v for k, v in entries.items() if not v.is_zero()}
        self._rows = None

    @property
    def dim(self) -> int:
        return self.N**self.M

    def _like(self, entries, clean=True) -> "SpinMatrix":
        return SpinMatrix(self.N, self.M, entries, _clean=clean)

    def rows(self) -> dict:
        if self._rows is None:
            rows: dict = {}
            for (r, c), v in self.entries.items():
                rows.setdefault(r, []).append((c, v))
            self._rows = rows
        return self._rows

    # constructors ------------------------------------------------------------
    @classmethod
    def identity(cls, N: int, M: int, one=None) -> "SpinMatrix":
        one = Cyclotomic.one() if one is None else one
        return cls(N, M, {(i, i): one for i in range(N**M)}, _clean=True)

    @classmethod
    def zero(cls, N: int, M: int) -> "SpinMatrix":
        return cls(N, M, {}, _clean=True)

    # queries -------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        if not isinstance(other, SpinMatrix):
            return NotImplemented
        return self.N == other.N and self.M == other.M and self.entries == other.entries

    def __hash__(self):
        return hash((self.N, self.M, frozenset(self.entries.items())))

    def is_identity(self) -> bool:
        d = self.dim
        if len(self.entries) != d:
            return False
        return all(self.entries.get((i, i)) == 1 for i in range(d))

    def _check(self, other: "SpinMatrix"):
        if self.N != other.N or self.M != other.M:
            raise ShapeMismatch(f"spin shapes ({self.N},{self.M}) and ({other.N},{other.M})")

    # arithmetic ------------------------------------------------------------------
    def __add__(self, other: "SpinMatrix") -> "SpinMatrix":
        self._check(other)
        if not other.entries:
            return self
        if not self.entries:
            return other
        out = dict(self.entries)
        for k, v in other.entries.items():
            w = out.get(k)
            if w is None:
                out[k] = v
            else:
                s = w + v
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return self._like(out)

    def __neg__(self):
        return self._like({k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SpinMatrix":
        out = {}
        for k, v in self.entries.items():
            p = v * c
            if not p.is_zero():
                out[k] = p
        return self._like(out)

    def map(self, fn) -> "SpinMatrix":
        out = {}
        for k, v in self.entries.items():
            p = fn(v)
            if not p.is_zero():
                out[k] = p
        return self._like(out)

    def __matmul__(self, other: "SpinMatrix") -> "SpinMatrix":
        self._check(other)
        orows = other.rows()
        acc: dict = {}
        for (r, k), a in self.entries.items():
            row = orows.get(k)
            if not row:
                continue
            for c, b in row:
                acc.setdefault((r, c), []).append(_ring_mul(a, b))
        out = {}
        for key, items in acc.items():
            s = _ring_sum(items)
            if not s.is_zero():
                out[key] = s
        return self._like(out)

    def __mul__(self, other):
        if isinstance(other, SpinMatrix):
            return self @ other
        return self.scale(other)

    def power(self, k: int) -> "SpinMatrix":
        out = SpinMatrix.identity(self.N, self.M)
        for _ in range(k):
            out = out @ self
        return out

    def transpose(self) -> "SpinMatrix":
        return self._like({(c, r): v for (r, c), v in self.entries.items()})

    def render(self) -> str:
        if not self.entries:
            return "0"
        parts = []
        for (r, c) in sorted(self.entries):
            v = self.entries[(r, c)]
            rs = "".join(str(x) for x in decode_state(r, self.N, self.M))
            cs = "".join(str(x) for x in decode_state(c, self.N, self.M))
            text = v.render() if hasattr(v, "render") and not isinstance(v, Cyclotomic) else str(v)
            parts.append(f"|{rs}><{cs}|:{text}")
        return "; ".join(parts)

    def __repr__(self):
        return f"SpinMatrix(N={self.N}, M={self.M}, nnz={len(self.entries)})"


# site constructors --------------------------------------------------------------

def _site(N: int, M: int, i: int):
    if not 1 <= i <= M:
        raise IndexOutOfRange(f"site {i} not in 1..{M}")


def _as_local(Q, N: int) -> list[list[Cyclotomic]]:
    if isinstance(Q, SpinMatrix):
        if Q.M != 1 or Q.N != N:
            raise ShapeMismatch("local matrix must act on a single site")
        rows = [[Cyclotomic.zero() for _ in range(N)] for _ in range(N)]
        for (r, c), v in Q.entries.items():
            rows[r][c] = as_scalar(v)
        return rows
    rows = [[as_scalar(v) for v in row] for row in Q]
    if len(rows) != N or any(len(row) != N for row in rows):
        raise ShapeMismatch(f"local matrix must be {N}x{N}")
    return rows


def transposition(N: int, M: int, i: int, j: int) -> SpinMatrix:
    _site(N, M, i)
    _site(N, M, j)
    one = Cyclotomic.one()
    out = {}
    for idx in range(N**M):
        s = list(decode_state(idx, N, M))
        s[i - 1], s[j - 1] = s[j - 1], s[i - 1]
        out[(encode_state(s, N), idx)] = one
    return SpinMatrix(N, M, out, _clean=True)


def local(N: int, M: int, Q, i: int) -> SpinMatrix:
    _site(N, M, i)
    q = _as_local(Q, N)
    out = {}
    for idx in range(N**M):
        s = list(decode_state(idx, N, M))
        b = s[i - 1]
        for a in range(N):
            v = q[a][b]
            if not v.is_zero():
                s[i - 1] = a
                out[(encode_state(s, N), idx)] = v
        s[i - 1] = b
    return SpinMatrix(N, M, out, _clean=True)


def site_unit(N: int, M: int, a: int, b: int, i: int) -> SpinMatrix:
    """E_ab acting at site i (a, b are 0-based local indices)."""
    _site(N, M, i)
    one = Cyclotomic.one()
    out = {}
    for idx in range(N**M):
        s = list(decode_state(idx, N, M))
        if s[i - 1] == b:
            s[i - 1] = a
            out[(encode_state(s, N), idx)] = one
    return SpinMatrix(N, M, out, _clean=True)


def place_permutation(N: int, M: int, perm) -> SpinMatrix:
    """v_1 (x) ... (x) v_M -> the tensor with v_j placed at site perm[j] (0-based)."""
    one = Cyclotomic.one()
    out = {}
    for idx in range(N**M):
        s = decode_state(idx, N, M)
        t = [0] * M
        for j, p in enumerate(perm):
            t[p] = s[j]
        out[(encode_state(t, N), idx)] = one
    return SpinMatrix(N, M, out, _clean=True)


def tensor_power(Q, N: int, M: int) -> SpinMatrix:
    out = SpinMatrix.identity(N, M)
    for i in range(1, M + 1):
        out = out @ local(N, M, Q, i)
    return out


def site_matrices(N: int, M: int, spec) -> SpinMatrix:
    """``("transposition", i, j)``, ``("local", Q, i)`` or ``("unit", a, b, i)``."""
    kind = spec[0]
    if kind == "transposition":
        return transposition(N, M, spec[1], spec[2])
    if kind == "local":
        return local(N, M, spec[1], spec[2])
    if kind == "unit":
        return site_unit(N, M, spec[1], spec[2], spec[3])
    raise ValueError(f"unknown site matrix {kind!r}")


# twist matrices ------------------------------------------------------------------

def default_twist_matrix(N: int, order: int, exponents=None) -> list[list[Cyclotomic]]:
    """Diagonal Q with Q^order = I.

    Order 2: +1 on the first ceil(N/2) entries, -1 on the rest.
    Order m: diag(zeta_m^c_i), c_i = i - 1 unless ``exponents`` is given.
    """
    if order == 2 and exponents is None:
        half = (N + 1) // 2
        diag = [Cyclotomic.one() if i < half else -Cyclotomic.one() for i in range(N)]
    else:
        exps = list(range(N)) if exponents is None else list(exponents)
        if len(exps) != N:
            raise InvalidTwistMatrix("one exponent per local basis vector")
        diag = [root_of_unity(order, e) for e in exps]
    return [[diag[i] if i == j else Cyclotomic.zero() for j in range(N)] for i in range(N)]


def _local_matrix_power_is_identity(Q, N: int, k: int) -> bool:
    m = SpinMatrix(N, 1, {(r, c): v for r, row in enumerate(Q) for c, v in enumerate(row)})
    return m.power(k).is_identity()


def _local_inverse(Q, N: int, order: int):
    m = SpinMatrix(N, 1, {(r, c): v for r, row in enumerate(Q) for c, v in enumerate(row)})
    inv = m.power(order - 1)
    rows = [[Cyclotomic.zero() for _ in range(N)] for _ in range(N)]
    for (r, c), v in inv.entries.items():
        rows[r][c] = v
    return rows


# representations ------------------------------------------------------------------

class SpinRepresentation:
    """Homomorphism W -> GL((C^N)^{(x)M}) given on every group element."""

    def __init__(self, group: Group, N: int, M: int, images: list[SpinMatrix],
                 generator_images: dict[str, SpinMatrix], label: str):
        self.group = group
        self.N = N
        self.M = M
        self.images = images
        self.generator_images = generator_images
        self.group_label = label
        self.relation_report: list[tuple[str, bool]] = []

    def __call__(self, w: int) -> SpinMatrix:
        return self.images[w]

    def inverse(self, w: int) -> SpinMatrix:
        return self.images[self.group.inv(w)]

    def is_homomorphism(self) -> bool:
        g = self.group
        for w in range(len(g)):
            for name in g.generator_names:
                s = g.generators[name]
                if self.images[g.mul(w, s)] != self.images[w] @ self.images[s]:
                    return False
        return True

    def check_pairs(self, pairs) -> bool:
        g = self.group
        return all(self.images[g.mul(w, v)] == self.images[w] @ self.images[v] for w, v in pairs)


def _word_image(images_by_name: dict, word, N, M) -> SpinMatrix:
    out = SpinMatrix.identity(N, M)
    for tok in word:
        if tok.endswith("^-1"):
            out = out @ images_by_name[tok[:-3] + "^-1"]
        else:
            out = out @ images_by_name[tok]
    return out


def _relation_report(rs: RootSystem, group: Group, images: list[SpinMatrix], N: int, M: int):
    by_name = {}
    for name, idx in group.named.items():
        by_name[name] = images[idx]
        by_name[name + "^-1"] = images[group.inv(idx)]
    out = []
    for name, lhs, rhs in presentation_relations(rs):
        out.append((name, _word_image(by_name, lhs, N, M) == _word_image(by_name, rhs, N, M)))
    return out


def _extend(group: Group, gens: dict[str, SpinMatrix], N: int, M: int) -> list[SpinMatrix]:
    """Images of all elements from images of named generators; raises on inconsistency."""
    images: list = [None] * len(group)
    images[0] = SpinMatrix.identity(N, M)
    order = [0]
    gen_list = [(name, group.named[name], mat) for name, mat in gens.items()]
    head = 0
    while head < len(order):
        w = order[head]
        head += 1
        for name, g, mat in gen_list:
            x = group.mul(w, g)
            img = images[w] @ mat
            if images[x] is None:
                images[x] = img
                order.append(x)
            elif images[x] != img:
                raise RelationFailure(f"generator images are inconsistent at a product with {name}")
    if any(im is None for im in images):
        raise RelationFailure("generator images do not reach every group element")
    return images


def orbit_rep(group: Group, orb: Orbit, N: int) -> SpinRepresentation:
    """R_w v_1 (x) ... (x) v_M = v_{w^-1(1)} (x) ... with w acting on orbit labels."""
    M = len(orb)
    images = [place_permutation(N, M, orb.action[w]) for w in range(len(group))]
    gens = {name: images[idx] for name, idx in group.named.items()}
    rep = SpinRepresentation(group, N, M, images, gens, group.root_system.group_label)
    rep.relation_report = _relation_report(group.root_system, group, images, N, M)
    if not rep.is_homomorphism():
        raise RelationFailure("orbit representation is not a homomorphism")
    return rep


def builtin_rep(group: Group, model: str, N: int, Q=None, exponents=None) -> SpinRepresentation:
    """The twisted representations: BL_standard, G2_three_spin, I2m_two_spin."""
    rs: RootSystem = group.root_system
    if model == "BL_standard":
        if rs.label != "B":
            raise ValueError("BL_standard needs a B root system")
        order, M = 2, rs.rank
    elif model == "G2_three_spin":
        if rs.label != "I2R3":
            raise ValueError("G2_three_spin needs I2(6) in R^3")
        order, M = 2, 3
    elif model == "I2m_two_spin":
        if rs.label != "I2R2":
            raise ValueError("I2m_two_spin needs I2(m) in R^2")
        order, M = rs.m, 2
    else:
        raise ValueError(f"unknown model {model!r}")
    Q = default_twist_matrix(N, order, exponents) if Q is None else _as_local(Q, N)
    if not _local_matrix_power_is_identity(Q, N, order):
        raise InvalidTwistMatrix(f"Q^{order} is not the identity")

    if model == "BL_standard":
        L = rs.rank
        gens = {f"t{i}": transposition(N, M, i, i + 1) for i in range(1, L)}
        gens["r"] = local(N, M, Q, L)
    elif model == "G2_three_spin":
        q = local(N, M, Q, 1) @ local(N, M, Q, 2) @ local(N, M, Q, 3)
        gens = {"t": transposition(N, M, 1, 2), "r": transposition(N, M, 2, 3) @ q}
    else:
        qinv = _local_inverse(Q, N, order)
        gens = {"a": local(N, M, Q, 1) @ local(N, M, qinv, 2), "b": transposition(N, M, 1, 2)}

    # name the violated relation before attempting the extension
    by_name = dict(gens)
    ident = SpinMatrix.identity(N, M)
    report = []
    for name, lhs, rhs in presentation_relations(rs):
        toks = set(lhs) | set(rhs)
        if not all(t.removesuffix("^-1") in gens for t in toks):
            continue
        for t in toks:
            if t.endswith("^-1") and t not in by_name:
                base = gens[t[:-3]]
                # generators have finite order; invert by powering
                p, k = base, 1
                while not p.is_identity():
                    p = p @ base
                    k += 1
                by_name[t] = base.power(k - 1) if k > 1 else ident
        ok = _word_image(by_name, lhs, N, M) == _word_image(by_name, rhs, N, M)
        report.append((name, ok))
        if not ok:
            raise RelationFailure(name)
    images = _extend(group, gens, N, M)
    rep = SpinRepresentation(group, N, M, images, gens, rs.group_label)
    rep.relation_report = _relation_report(rs, group, images, N, M)
    rep.twist_matrix = Q
    rep.twist_order = order
    return rep


# combined position (x) spin operators ---------------------------------------------------

def _spin_const(S: SpinMatrix, nvars: int) -> SpinMatrix:
    return S.map(lambda v: RationalFunction.constant(nvars, v))


class CombinedOperator:
    """sum over (w, beta) of [matrix of rational functions] * d^beta * w^."""

    __slots__ = ("group", "N", "M", "terms")

    def __init__(self, group: Group, N: int, M: int, terms: dict | None = None, *, _clean=False):
        self.group = group
        self.N = N
        self.M = M
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            self.terms = {k: v for k, v in terms.items() if not v.is_zero()}

    @property
    def nvars(self) -> int:
        return self.group.dim

    def _like(self, terms) -> "CombinedOperator":
        return CombinedOperator(self.group, self.N, self.M, terms, _clean=True)

    # constructors ------------------------------------------------------------
    @classmethod
    def zero(cls, group: Group, N: int, M: int) -> "CombinedOperator":
        return cls(group, N, M, {}, _clean=True)

    @classmethod
    def from_position(cls, op: NormalFormOperator, N: int, M: int) -> "CombinedOperator":
        d = N**M
        terms = {k: SpinMatrix(N, M, {(i, i): f for i in range(d)}, _clean=True) for k, f in op.terms.items()}
        return cls(op.group, N, M, terms, _clean=True)

    @classmethod
    def from_spin(cls, group: Group, S: SpinMatrix, w: int = 0, f: RationalFunction | None = None) -> "CombinedOperator":
        """f * S * w^ (f defaults to 1)."""
        n = group.dim
        m = _spin_const(S, n)
        if f is not None:
            m = m.map(lambda v: v.mul(f))
        return cls(group, S.N, S.M, {(w, (0,) * n): m})

    # queries -------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, CombinedOperator):
            return NotImplemented
        return self.terms == other.terms

    def _check(self, other: "CombinedOperator"):
        if (self.N, self.M, self.nvars) != (other.N, other.M, other.nvars):
            raise ShapeMismatch("combined operators act on different spaces")

    def group_support(self) -> set[int]:
        return {w for w, _ in self.terms}

    # arithmetic ----------------------------------------------------------------------
    def __add__(self, other: "CombinedOperator") -> "CombinedOperator":
        self._check(other)
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
        return self._like(out)

    def __neg__(self):
        return self._like({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "CombinedOperator":
        c = as_scalar(c)
        if c.is_zero():
            return self._like({})
        return self._like({k: v.scale(c) for k, v in self.terms.items()})

    def compose(self, other: "CombinedOperator") -> "CombinedOperator":
        self._check(other)
        g = self.group
        n = self.nvars
        acc: dict = {}
        acted: dict = {}
        for (w1, b1), m1 in self.terms.items():
            for (w2, b2), m2 in other.terms.items():
                akey = (w1, w2, b2)
                cache = acted.get(akey)
                if cache is None:
                    cache = {(0,) * n: m2.map(lambda f: f.act(g, w1))}
                    acted[akey] = cache
                trans = _transported_derivative(g, w1, b2)
                w = g.mul(w1, w2)
                for delta in sub_indices(b1):
                    dm = _matrix_partial(cache, delta)
                    if dm.is_zero():
                        continue
                    prod = m1 @ dm
                    if prod.is_zero():
                        continue
                    coef = binom_mult(b1, delta)
                    rest = tuple(b - d for b, d in zip(b1, delta))
                    for gamma, c in trans.items():
                        beta = tuple(r + x for r, x in zip(rest, gamma))
                        cc = c * coef
                        bucket = acc.setdefault((w, beta), {})
                        for key, v in prod.entries.items():
                            bucket.setdefault(key, []).append(v if cc == 1 else v.scale(cc))
        out = {}
        for k, bucket in acc.items():
            entries = {}
            for key, items in bucket.items():
                s = RationalFunction.sum(items, n)
                if not s.is_zero():
                    entries[key] = s
            if entries:
                out[k] = SpinMatrix(self.N, self.M, entries, _clean=True)
        return self._like(out)

    def __mul__(self, other):
        if isinstance(other, CombinedOperator):
            return self.compose(other)
        return self.scale(other)

    def commutator(self, other: "CombinedOperator") -> "CombinedOperator":
        return self.compose(other) - other.compose(self)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (w, beta) in sorted(self.terms):
            d = "*".join(f"D{j + 1}^{b}" if b > 1 else f"D{j + 1}" for j, b in enumerate(beta) if b)
            head = f"w{w}" + (f" {d}" if d else "")
            parts.append(f"{head}: {self.terms[(w, beta)].render()}")
        return "\n".join(parts)

    def __repr__(self):
        return f"CombinedOperator({len(self.terms)} terms)"


def _matrix_partial(cache: dict, delta: tuple) -> SpinMatrix:
    if delta in cache:
        return cache[delta]
    j = next(i for i, d in enumerate(delta) if d)
    lower = list(delta)
    lower[j] -= 1
    base = _matrix_partial(cache, tuple(lower))
    out = base.map(lambda f: f.deriv(j))
    cache[delta] = out
    return out


def combined_arith(a: CombinedOperator, b: CombinedOperator, op: str) -> CombinedOperator:
    if op == "add":
        return a + b
    if op == "compose":
        return a.compose(b)
    if op == "commutator":
        return a.commutator(b)
    raise ValueError(op)


def reduce_operator(a: CombinedOperator, rep: SpinRepresentation) -> CombinedOperator:
    """Canonical form of a*Lambda: every w^ is traded for R_w^-1 (w^ Lambda = R_w^-1 Lambda)."""
    n = a.nvars
    out = CombinedOperator.zero(a.group, a.N, a.M)
    for (w, beta), m in a.terms.items():
        if w == 0:
            piece = m
        else:
            piece = m @ _spin_const(rep.inverse(w), n)
        out = out + CombinedOperator(a.group, a.N, a.M, {(0, beta): piece})
    return out


# projectors ---------------------------------------------------------------------------------

class Projector:
    def __init__(self, lam: CombinedOperator, rep: SpinRepresentation):
        self.lam = lam
        self.rep = rep

    @property
    def group(self) -> Group:
        return self.rep.group

    def is_idempotent(self) -> bool:
        return self.lam.compose(self.lam) == self.lam

    def left_invariance(self) -> list[tuple[str, bool]]:
        """g^ R_g Lambda = Lambda for every named generator."""
        out = []
        for name in sorted(self.group.named):
            g = self.group.named[name]
            lhs = CombinedOperator.from_spin(self.group, self.rep(g), w=g).compose(self.lam)
            out.append((name, lhs == self.lam))
        return out


def partial_projector(group: Group, N: int, M: int, pairs, weight) -> CombinedOperator:
    """weight * sum of w^ S over the given (element, spin matrix) pairs."""
    weight = as_scalar(weight)
    out = CombinedOperator.zero(group, N, M)
    for w, S in pairs:
        out = out + CombinedOperator.from_spin(group, S.scale(weight), w=w)
    return out


def projector_lambda(group: Group, rep: SpinRepresentation) -> Projector:
    """Lambda = (1/|W|) sum_w w^ R_w."""
    lam = partial_projector(group, rep.N, rep.M, [(w, rep(w)) for w in range(len(group))],
                            Fraction(1, len(group)))
    return Projector(lam, rep)
