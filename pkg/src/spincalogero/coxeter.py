"""Root systems, finite reflection groups, orbits and presentations.

Supported families are the ones the spin Calogero models are built on:
``B`` (rank L, roots e_i +- e_j and e_k), ``A`` (roots e_i - e_j in R^L),
the dihedral group I2(6) embedded in R^3 (``I2R3``) and I2(m) in the plane
(``I2R2``).  All vectors and matrices are exact over a cyclotomic field.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .scalars import Cyclotomic, as_scalar, rational, root_of_unity

Vector = tuple[Cyclotomic, ...]
Matrix = tuple[tuple[Cyclotomic, ...], ...]

DEFAULT_CLOSURE_BUDGET = 10**6


class UnsupportedFamily(ValueError):
    pass


class ZeroRoot(ValueError):
    pass


class ClosureBudgetExceeded(RuntimeError):
    pass


class PointNotInOrbit(KeyError):
    pass


class OrbitMismatch(ValueError):
    pass


# vector helpers -----------------------------------------------------------

def vec(values, order: int = 1) -> Vector:
    return tuple(as_scalar(v, order) if not isinstance(v, Cyclotomic) else v for v in values)


def dot(a, b) -> Cyclotomic:
    total = Cyclotomic.zero()
    for x, y in zip(a, b):
        if not x.is_zero() and not y.is_zero():
            total = total + x * y
    return total


def scale(c, v) -> Vector:
    return tuple(c * x for x in v)


def vadd(a, b) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def reflect(alpha, mu) -> Vector:
    """s_alpha(mu) = mu - 2 (mu, alpha)/(alpha, alpha) alpha."""
    aa = dot(alpha, alpha)
    if aa.is_zero():
        raise ZeroRoot("cannot reflect in a zero vector")
    f = dot(mu, alpha) * 2 / aa
    return tuple(m - f * a for m, a in zip(mu, alpha))


def reflection_matrix(alpha) -> Matrix:
    n = len(alpha)
    cols = []
    for j in range(n):
        e = [Cyclotomic.zero()] * n
        e[j] = Cyclotomic.one()
        cols.append(reflect(alpha, tuple(e)))
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def identity_matrix(n: int) -> Matrix:
    return tuple(
        tuple(Cyclotomic.one() if i == j else Cyclotomic.zero() for j in range(n)) for i in range(n)
    )


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    m = len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = Cyclotomic.zero()
            for k in range(len(b)):
                x = a[i][k]
                if not x.is_zero():
                    y = b[k][j]
                    if not y.is_zero():
                        s = s + x * y
            row.append(s)
        out.append(tuple(row))
    return tuple(out)


def matvec(a: Matrix, v) -> Vector:
    return tuple(dot(row, v) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def is_parallel(a, b) -> bool:
    """True when a = lambda * b for some scalar lambda."""
    piv = next(i for i, x in enumerate(b) if not x.is_zero())
    lam = a[piv] / b[piv]
    return all(x == lam * y for x, y in zip(a, b))


def _key(entries, order: int):
    return tuple((e.embed(order).num, e.embed(order).den) for e in entries)


# root systems -------------------------------------------------------------

@dataclass(frozen=True)
class RootSystem:
    label: str
    ambient_dim: int
    rank: int
    positive_roots: tuple[Vector, ...]
    simple_roots: tuple[Vector, ...]
    field_order: int
    m: int = 0

    @property
    def group_label(self) -> str:
        if self.label == "B":
            return f"B_{self.rank}"
        if self.label == "A":
            return f"A_{self.ambient_dim - 1}"
        if self.label == "I2R3":
            return "I2(6)-in-R3"
        return f"I2({self.m})-in-R2"

    def all_roots(self) -> list[Vector]:
        return list(self.positive_roots) + [tuple(-x for x in a) for a in self.positive_roots]

    def root_index(self, alpha) -> tuple[int, int]:
        """(index in positive_roots, sign) of a root, matched up to sign."""
        for i, a in enumerate(self.positive_roots):
            if tuple(alpha) == a:
                return i, 1
            if tuple(-x for x in alpha) == a:
                return i, -1
        raise KeyError("not a root")

    def parallel_root(self, v) -> int:
        for i, a in enumerate(self.positive_roots):
            if is_parallel(v, a):
                return i
        raise KeyError("no parallel root")


def _unit(n, i, order=1) -> Vector:
    return tuple(Cyclotomic.one(order) if j == i else Cyclotomic.zero(order) for j in range(n))


def dihedral_field_order(m: int) -> int:
    a, b = 4, 2 * m
    return a * b // gcd(a, b)


def build_root_system(label: str, n: int) -> RootSystem:
    """Build one of the supported root systems.

    ``label`` is ``"B"`` (n = rank L), ``"A"`` (n = ambient dimension),
    ``"I2R3"`` (n must be 6) or ``"I2R2"`` (n = m >= 2).
    """
    if label == "B":
        L = n
        if L < 1:
            raise UnsupportedFamily("B_L needs L >= 1")
        roots = []
        for i in range(L):
            for j in range(i + 1, L):
                ei, ej = _unit(L, i), _unit(L, j)
                roots.append(vadd(ei, scale(-1, ej)))
                roots.append(vadd(ei, ej))
        for k in range(L):
            roots.append(_unit(L, k))
        simple = [vadd(_unit(L, i), scale(-1, _unit(L, i + 1))) for i in range(L - 1)]
        simple.append(_unit(L, L - 1))
        return RootSystem("B", L, L, tuple(roots), tuple(simple), 1)
    if label == "A":
        L = n
        if L < 2:
            raise UnsupportedFamily("A needs ambient dimension >= 2")
        roots = [
            vadd(_unit(L, i), scale(-1, _unit(L, j))) for i in range(L) for j in range(i + 1, L)
        ]
        simple = [vadd(_unit(L, i), scale(-1, _unit(L, i + 1))) for i in range(L - 1)]
        return RootSystem("A", L, L - 1, tuple(roots), tuple(simple), 1)
    if label == "I2R3":
        if n != 6:
            raise UnsupportedFamily("only I2(6) has a built-in embedding in R^3")
        rows = [
            (1, -1, 0), (-1, 0, 1), (0, -1, 1),
            (-2, 1, 1), (1, -2, 1), (-1, -1, 2),
        ]
        roots = tuple(vec(r) for r in rows)
        return RootSystem("I2R3", 3, 2, roots, (roots[0], roots[3]), 1, m=6)
    if label == "I2R2":
        m = n
        if m < 2:
            raise UnsupportedFamily("I2(m) needs m >= 2")
        order = dihedral_field_order(m)
        # equal-length roots sqrt2*(cos t, sin t), t = -pi/4 + k pi/m
        z = root_of_unity(2 * m, 1).embed(order)
        i = root_of_unity(4, 1).embed(order)
        roots = []
        for k in range(m):
            zk, zmk = z**k, z ** (-k)
            c = (zk + zmk) / 2
            s = (zk - zmk) / (i * 2)
            roots.append((c + s, s - c))
        return RootSystem("I2R2", 2, 2, tuple(roots), (roots[0], roots[-1]), order, m=m)
    raise UnsupportedFamily(f"unsupported family {label!r}")


# groups -------------------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    matrix: Matrix
    word: tuple[str, ...] = ()

    def act(self, v) -> Vector:
        return matvec(self.matrix, v)


class Group:
    """A finite matrix group with index-based multiplication tables.

    Element 0 is the identity.  Elements are listed in BFS order over the
    generators, so indices are deterministic.
    """

    def __init__(self, generators: dict[str, Matrix], order: int, budget: int = DEFAULT_CLOSURE_BUDGET):
        self.field_order = order
        self.generator_names = list(generators)
        dim = len(next(iter(generators.values())))
        self.dim = dim
        ident = identity_matrix(dim)
        self.elements: list[GroupElement] = [GroupElement(ident, ())]
        self._index = {self._k(ident): 0}
        queue = deque([0])
        gens = [(name, generators[name]) for name in self.generator_names]
        while queue:
            i = queue.popleft()
            g = self.elements[i]
            for name, s in gens:
                h = matmul(g.matrix, s)
                k = self._k(h)
                if k not in self._index:
                    if len(self.elements) >= budget:
                        raise ClosureBudgetExceeded(f"group exceeds {budget} elements")
                    self._index[k] = len(self.elements)
                    self.elements.append(GroupElement(h, g.word + (name,)))
                    queue.append(len(self.elements) - 1)
        self.generators = {name: self._index[self._k(s)] for name, s in gens}
        self._mul: dict[tuple[int, int], int] = {}
        self._inv: dict[int, int] = {}

    def _k(self, mat):
        return _key([x for row in mat for x in row], self.field_order)

    def __len__(self):
        return len(self.elements)

    def index(self, mat) -> int:
        return self._index[self._k(mat)]

    def find(self, mat) -> int | None:
        return self._index.get(self._k(mat))

    def matrix(self, i: int) -> Matrix:
        return self.elements[i].matrix

    def mul(self, i: int, j: int) -> int:
        key = (i, j)
        r = self._mul.get(key)
        if r is None:
            if i == 0:
                r = j
            elif j == 0:
                r = i
            else:
                r = self.index(matmul(self.elements[i].matrix, self.elements[j].matrix))
            self._mul[key] = r
        return r

    def inv(self, i: int) -> int:
        r = self._inv.get(i)
        if r is None:
            r = self.index(transpose(self.elements[i].matrix))
            self._inv[i] = r
        return r

    def power(self, i: int, k: int) -> int:
        if k < 0:
            i, k = self.inv(i), -k
        r = 0
        for _ in range(k):
            r = self.mul(r, i)
        return r

    def word(self, *names) -> int:
        r = 0
        for n in names:
            if isinstance(n, str):
                n = self.generators[n] if n in self.generators else self.named[n]
            r = self.mul(r, n)
        return r

    def act(self, i: int, v) -> Vector:
        return matvec(self.elements[i].matrix, v)

    def is_closed(self) -> bool:
        return all(self.find(matmul(a.matrix, b.matrix)) is not None for a in self.elements for b in self.elements)

    def is_orthogonal(self, i: int) -> bool:
        m = self.elements[i].matrix
        return matmul(transpose(m), m) == identity_matrix(self.dim)


def generate_group(rs: RootSystem, budget: int = DEFAULT_CLOSURE_BUDGET) -> Group:
    """Closure of the simple reflections, BFS in simple-root order."""
    gens = {f"s{i + 1}": reflection_matrix(a) for i, a in enumerate(rs.simple_roots)}
    group = Group(gens, rs.field_order, budget)
    group.root_system = rs
    _name_generators(rs, group)
    return group


def _name_generators(rs: RootSystem, group: Group):
    """Attach the named generators used by the presentations."""
    o = rs.field_order
    names: dict[str, int] = {}
    if rs.label == "B":
        L = rs.rank
        for i in range(L - 1):
            perm = [list(r) for r in identity_matrix(L)]
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            names[f"t{i + 1}"] = group.index(tuple(tuple(r) for r in perm))
        diag = [list(r) for r in identity_matrix(L)]
        diag[L - 1][L - 1] = -Cyclotomic.one()
        names["r"] = group.index(tuple(tuple(r) for r in diag))
    elif rs.label == "A":
        L = rs.ambient_dim
        for i in range(L - 1):
            perm = [list(r) for r in identity_matrix(L)]
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
            names[f"t{i + 1}"] = group.index(tuple(tuple(r) for r in perm))
    elif rs.label == "I2R3":
        t = tuple(tuple(rational(v) for v in row) for row in ((0, 1, 0), (1, 0, 0), (0, 0, 1)))
        third = Fraction(1, 3)
        r = tuple(tuple(rational(v * third) for v in row) for row in ((-1, 2, 2), (2, 2, -1), (2, -1, 2)))
        names["t"] = group.index(t)
        names["r"] = group.index(r)
        names["b"] = names["t"]
        names["a"] = group.mul(names["t"], names["r"])
    elif rs.label == "I2R2":
        m = rs.m
        z = root_of_unity(m, 1).embed(o)
        zi = root_of_unity(m, -1).embed(o)
        i = root_of_unity(4, 1).embed(o)
        c = (z + zi) / 2
        s = (z - zi) / (i * 2)
        a = ((c, -s), (s, c))
        b = ((Cyclotomic.zero(o), Cyclotomic.one(o)), (Cyclotomic.one(o), Cyclotomic.zero(o)))
        names["a"] = group.index(a)
        names["b"] = group.index(b)
        names["t"] = names["b"]
        names["r"] = group.index(reflection_matrix(rs.simple_roots[1]))
    group.named = names
    return names


def presentation_relations(rs: RootSystem) -> list[tuple[str, tuple[str, ...], tuple[str, ...]]]:
    """Defining relations as (name, lhs word, rhs word) over named generators.

    A token ``"x^-1"`` stands for the inverse of generator ``x``.
    """
    rels: list[tuple[str, tuple[str, ...], tuple[str, ...]]] = []

    def rel(name, *word):
        rels.append((name, tuple(word), ()))

    if rs.label in ("B", "A"):
        L = rs.rank if rs.label == "B" else rs.ambient_dim
        for i in range(1, L):
            rel(f"t{i}^2=1", f"t{i}", f"t{i}")
        for i in range(1, L - 1):
            rel(f"(t{i}t{i + 1})^3=1", *([f"t{i}", f"t{i + 1}"] * 3))
        for i in range(1, L):
            for j in range(i + 2, L):
                rel(f"(t{i}t{j})^2=1", *([f"t{i}", f"t{j}"] * 2))
        if rs.label == "B":
            rel("r^2=1", "r", "r")
            if L >= 2:
                rel(f"(rt{L - 1})^4=1", *(["r", f"t{L - 1}"] * 4))
            for j in range(1, L - 1):
                rel(f"(rt{j})^2=1", *(["r", f"t{j}"] * 2))
    else:
        m = rs.m
        rel("t^2=1", "t", "t")
        rel("r^2=1", "r", "r")
        rel(f"(tr)^{m}=1", *(["t", "r"] * m))
        rel(f"a^{m}=1", *(["a"] * m))
        rel("b^2=1", "b", "b")
        rels.append(("ba=a^-1b", ("b", "a"), ("a^-1", "b")))
        rels.append(("a=tr", ("a",), ("t", "r")))
        rels.append(("b=t", ("b",), ("t",)))
    return rels


def evaluate_word(group: Group, word) -> int:
    r = 0
    for tok in word:
        if tok.endswith("^-1"):
            r = group.mul(r, group.inv(group.named[tok[:-3]]))
        else:
            r = group.mul(r, group.named[tok])
    return r


def verify_presentation(rs: RootSystem, group: Group) -> list[tuple[str, bool]]:
    """Evaluate each defining relation as an exact matrix identity."""
    report = [
        (name, evaluate_word(group, lhs) == evaluate_word(group, rhs))
        for name, lhs, rhs in presentation_relations(rs)
    ]
    if rs.label not in ("B", "A"):
        # the product of the orders pins down the group
        report.append((f"|W|={2 * rs.m}", len(group) == 2 * rs.m))
    return report


# orbits -------------------------------------------------------------------

@dataclass
class Orbit:
    base_point: Vector
    points: list[Vector]
    action: list[list[int]] = field(repr=False)  # action[w][i] = j

    def __len__(self):
        return len(self.points)

    def index(self, v) -> int:
        v = tuple(v)
        for i, p in enumerate(self.points):
            if p == v:
                return i
        raise PointNotInOrbit(v)


def orbit(group: Group, mu, order_override=None) -> Orbit:
    """Orbit of mu, BFS over the generators unless an explicit order is given."""
    o = group.field_order
    mu = vec(mu, o)
    pts = [mu]
    idx = {_key(mu, o): 0}
    queue = deque([mu])
    gens = [group.generators[n] for n in group.generator_names]
    while queue:
        p = queue.popleft()
        for s in gens:
            q = group.act(s, p)
            k = _key(q, o)
            if k not in idx:
                idx[k] = len(pts)
                pts.append(q)
                queue.append(q)
    if order_override is not None:
        override = [vec(v, o) for v in order_override]
        if len(override) != len(pts) or {_key(v, o) for v in override} != set(idx):
            raise PointNotInOrbit("override is not a reordering of the orbit")
        pts = override
        idx = {_key(v, o): i for i, v in enumerate(pts)}
    action = []
    for w in range(len(group)):
        row = []
        for p in pts:
            k = _key(group.act(w, p), o)
            if k not in idx:
                raise PointNotInOrbit(p)
            row.append(idx[k])
        action.append(row)
    return Orbit(mu, pts, action)


def induced_permutation(orb: Orbit, w: int) -> tuple[int, ...]:
    """w-check: i -> j iff w(mu_i) = mu_j."""
    return tuple(orb.action[w])


# multiplicities -----------------------------------------------------------

def root_orbits(rs: RootSystem, group: Group) -> list[int]:
    """Orbit id (smallest member index) for every positive root."""
    n = len(rs.positive_roots)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for name in group.generator_names:
        s = group.generators[name]
        for i, a in enumerate(rs.positive_roots):
            j = rs.parallel_root(group.act(s, a))
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    return [find(i) for i in range(n)]


@dataclass(frozen=True)
class MultiplicityFunction:
    values: tuple[Cyclotomic, ...]  # one per positive root

    def __call__(self, i: int) -> Cyclotomic:
        return self.values[i]


def assign_multiplicities(rs: RootSystem, group: Group, values: dict) -> MultiplicityFunction:
    """Build k from ``{positive root index: value}``; must be constant on W-orbits.

    Indices not given inherit the value of their orbit.
    """
    orbits = root_orbits(rs, group)
    per_orbit: dict[int, Cyclotomic] = {}
    for i, v in values.items():
        v = as_scalar(v)
        o = orbits[i]
        if o in per_orbit and per_orbit[o] != v:
            raise OrbitMismatch(f"roots in orbit {o} receive different values")
        per_orbit[o] = v
    missing = {o for o in orbits if o not in per_orbit}
    if missing:
        raise OrbitMismatch(f"no value for root orbits {sorted(missing)}")
    return MultiplicityFunction(tuple(per_orbit[o] for o in orbits))


def short_long_representatives(rs: RootSystem) -> tuple[int, int | None]:
    """Positive-root indices carrying k_s and k_l in the models."""
    if rs.label == "B":
        return rs.root_index(_unit(rs.rank, rs.rank - 1))[0], 0
    if rs.label == "A":
        return 0, None
    if rs.label == "I2R3":
        return 0, 3
    return 0, (1 if rs.m % 2 == 0 else None)


def model_multiplicities(rs: RootSystem, group: Group, k_s, k_l) -> MultiplicityFunction:
    """k_s on the short orbit, k_l on the long one (a single orbit gets k_s)."""
    s, l = short_long_representatives(rs)
    vals = {s: k_s}
    if l is not None:
        vals[l] = k_l
    return assign_multiplicities(rs, group, vals)


def check_multiplicity(rs: RootSystem, group: Group, k: MultiplicityFunction) -> bool:
    """k(beta) = k(s_alpha beta) for every pair of roots."""
    for a in rs.positive_roots:
        sa = reflection_matrix(a)
        for j, b in enumerate(rs.positive_roots):
            if k(rs.parallel_root(matvec(sa, b))) != k(j):
                return False
    return True


def root_system_stable(rs: RootSystem) -> bool:
    roots = rs.all_roots()
    keys = {_key(r, rs.field_order) for r in roots}
    for a in rs.positive_roots:
        for b in roots:
            if _key(reflect(a, b), rs.field_order) not in keys:
                return False
    return True


def simple_expansion_signs_ok(rs: RootSystem) -> bool:
    """Every positive root is a one-sign combination of the simple roots."""
    from .linalg import solve

    simple = rs.simple_roots
    cols = [[simple[j][i] for j in range(len(simple))] for i in range(rs.ambient_dim)]
    for a in rs.positive_roots:
        sol = solve(cols, list(a))
        if sol is None:
            return False
        real = [complex(c).real for c in sol]
        if not (all(x >= -1e-12 for x in real) or all(x <= 1e-12 for x in real)):
            return False
    return True
