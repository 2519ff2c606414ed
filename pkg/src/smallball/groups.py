"""Carriers: finite groups given by operation tables, windowed integer
lattices, and rational vector spaces.

Finite-group elements are integer indices into the element list.  Lattice
and rational-space elements are plain numbers in dimension one and
:class:`RationalVector` tuples otherwise.

Under the discrete topology every subset of a finite group is open, so the
"identity in the interior of K" hypothesis of the small-ball theorems
reduces to ``identity in K`` on these carriers.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CarrierMismatchError, InvalidOrderError

ASSOCIATIVITY_CHECK_LIMIT = 256


class RationalVector(tuple):
    """Fixed-length vector of exact rationals with componentwise arithmetic."""

    def __new__(cls, coords):
        return super().__new__(cls, (Fraction(c) for c in coords))

    @property
    def dim(self):
        return len(self)

    def __add__(self, other):
        if len(other) != len(self):
            raise ValueError("dimension mismatch")
        return RationalVector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        if len(other) != len(self):
            raise ValueError("dimension mismatch")
        return RationalVector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return RationalVector(-a for a in self)

    def __mul__(self, c):
        c = Fraction(c)
        return RationalVector(c * a for a in self)

    __rmul__ = __mul__

    def norm2_squared(self):
        return sum(a * a for a in self)

    def __repr__(self):
        return "RationalVector(" + ", ".join(str(a) for a in self) + ")"


def _as_rational(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


class FiniteGroup:
    """A finite group presented by its Cayley table.

    ``table[x][y]`` is the index of ``x*y``.  The inverse map and identity are
    derived from the table and the group axioms are verified on
    construction (associativity exhaustively when the order is at most 256).
    """

    kind = "finite"
    is_vector = False

    def __init__(self, labels, table, *, name="table", params=None, distinguished=None):
        n = len(labels)
        if n == 0:
            raise InvalidOrderError("a group needs at least one element")
        self.labels = tuple(str(lab) for lab in labels)
        self.table = tuple(tuple(int(v) for v in row) for row in table)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError("operation table must be square with one row per element")
        self.order = n
        self.name = name
        self.params = dict(params or {})
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}

        identity = None
        for e in range(n):
            if all(self.table[e][x] == x and self.table[x][e] == x for x in range(n)):
                identity = e
                break
        if identity is None:
            raise ValueError("operation table has no identity")
        self.identity = identity

        inverse = []
        for x in range(n):
            row = self.table[x]
            try:
                y = row.index(identity)
            except ValueError:
                raise ValueError(f"element {self.labels[x]} has no inverse") from None
            if self.table[y][x] != identity:
                raise ValueError(f"element {self.labels[x]} has no two-sided inverse")
            inverse.append(y)
        self.inverse = tuple(inverse)

        if n <= ASSOCIATIVITY_CHECK_LIMIT and not _is_associative(self.table):
            raise ValueError("operation table is not associative")

        self.is_abelian = all(
            self.table[x][y] == self.table[y][x] for x in range(n) for y in range(x + 1, n)
        )
        self.distinguished = {
            key: frozenset(members) for key, members in (distinguished or {}).items()
        }

    @property
    def elements(self):
        return range(self.order)

    @property
    def key(self):
        if self.name == "table":
            return ("table", self.labels, self.table)
        return (self.name, tuple((k, tuple(v) if isinstance(v, list) else v) for k, v in sorted(self.params.items())))

    def __eq__(self, other):
        return self is other or (isinstance(other, FiniteGroup) and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def op(self, x, y):
        return self.table[x][y]

    def inv(self, x):
        return self.inverse[x]

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.order

    def coerce(self, x):
        if isinstance(x, str) and x in self._label_index:
            return self._label_index[x]
        if isinstance(x, (list, tuple)) and self.name == "product":
            return _product_index(self.params["orders"], x)
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.order:
            return x
        raise ValueError(f"{x!r} is not an element of {self.describe()}")

    def label(self, x):
        return self.labels[x]

    @staticmethod
    def sort_key(x):
        return x

    def same_group(self, other):
        return self == other

    def describe(self):
        if self.name == "table":
            return f"group of order {self.order}"
        args = ",".join(str(v) for _, v in sorted(self.params.items()))
        return f"{self.name}({args})"

    def to_json(self):
        if self.name == "table":
            return {"kind": "table", "labels": list(self.labels), "table": [list(r) for r in self.table]}
        out = {"kind": self.name}
        out.update(self.params)
        return out

    def __repr__(self):
        return f"FiniteGroup<{self.describe()}>"


def _is_associative(table):
    t = np.asarray(table, dtype=np.int32)
    return bool(np.array_equal(t[t], t[:, t]))


def _product_index(orders, coords):
    if len(coords) != len(orders):
        raise ValueError(f"expected {len(orders)} coordinates, got {coords!r}")
    index = 0
    for c, n in zip(coords, orders):
        index = index * n + int(c) % n
    return index


@lru_cache(maxsize=None)
def make_cyclic(n):
    """The cyclic group of integers modulo ``n``."""
    if not isinstance(n, int) or n < 1:
        raise InvalidOrderError(f"cyclic group order must be a positive integer, got {n!r}")
    table = [[(x + y) % n for y in range(n)] for x in range(n)]
    return FiniteGroup([str(i) for i in range(n)], table, name="cyclic", params={"n": n})


@lru_cache(maxsize=None)
def _make_product(orders):
    for n in orders:
        if not isinstance(n, int) or n < 1:
            raise InvalidOrderError(f"factor orders must be positive integers, got {orders!r}")
    tuples = list(itertools.product(*(range(n) for n in orders)))
    index = {t: i for i, t in enumerate(tuples)}
    table = [
        [index[tuple((a + b) % n for a, b, n in zip(s, t, orders))] for t in tuples]
        for s in tuples
    ]
    labels = ["(" + ",".join(map(str, t)) + ")" for t in tuples]
    return FiniteGroup(labels, table, name="product", params={"orders": list(orders)})


def make_product(*orders):
    """Direct product of cyclic groups, elements ordered lexicographically."""
    if len(orders) == 1 and isinstance(orders[0], (list, tuple)):
        orders = tuple(orders[0])
    if not orders:
        raise InvalidOrderError("a product needs at least one factor")
    return _make_product(tuple(orders))


@lru_cache(maxsize=None)
def make_dihedral(n):
    """The dihedral group of order ``2n``.

    Element ``k*n + i`` is ``s^k r^i`` with rotation ``r`` and a reflection
    ``s``; the rotation subgroup is recorded under ``distinguished["rotations"]``.
    """
    if not isinstance(n, int) or n < 3:
        raise InvalidOrderError(f"dihedral groups need n >= 3, got {n!r}")

    def mul(x, y):
        k1, i1 = divmod(x, n)
        k2, i2 = divmod(y, n)
        if k2 == 0:
            return k1 * n + (i1 + i2) % n
        return ((k1 + 1) % 2) * n + (i2 - i1) % n

    labels = []
    for k in range(2):
        for i in range(n):
            rot = "" if i == 0 else ("r" if i == 1 else f"r{i}")
            lab = ("s" if k else "") + rot
            labels.append(lab or "e")
    table = [[mul(x, y) for y in range(2 * n)] for x in range(2 * n)]
    return FiniteGroup(
        labels, table, name="dihedral", params={"n": n},
        distinguished={"rotations": range(n)},
    )


@lru_cache(maxsize=None)
def make_symmetric(n):
    """The symmetric group on ``n`` points; product is composition ``(p*q)(i) = p(q(i))``."""
    if not isinstance(n, int) or not 1 <= n <= 6:
        raise InvalidOrderError(f"symmetric groups are supported for 1 <= n <= 6, got {n!r}")
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    even = [i for i, p in enumerate(perms) if _parity(p) == 0]
    labels = ["".join(map(str, p)) for p in perms]
    return FiniteGroup(
        labels, table, name="symmetric", params={"n": n},
        distinguished={"alternating": even},
    )


def _parity(perm):
    seen = [False] * len(perm)
    parity = 0
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


class Lattice:
    """The integer lattice Z^d restricted to the box ``[lo, hi]^d``.

    Sums and differences of sets are placed in an enlarged window rather
    than truncated, so no mass is ever lost.
    """

    kind = "lattice"
    is_vector = False
    is_abelian = True

    def __init__(self, dim, lo, hi):
        if not isinstance(dim, int) or dim < 1:
            raise InvalidOrderError(f"lattice dimension must be positive, got {dim!r}")
        lo, hi = int(lo), int(hi)
        if lo > hi:
            raise InvalidOrderError(f"empty lattice window [{lo}, {hi}]")
        self.dim, self.lo, self.hi = dim, lo, hi
        self.identity = 0 if dim == 1 else RationalVector([0] * dim)

    def __eq__(self, other):
        return isinstance(other, Lattice) and (self.dim, self.lo, self.hi) == (other.dim, other.lo, other.hi)

    def __hash__(self):
        return hash(("lattice", self.dim, self.lo, self.hi))

    @staticmethod
    def op(x, y):
        return x + y

    @staticmethod
    def inv(x):
        return -x

    def _coords(self, x):
        return (x,) if self.dim == 1 else tuple(x)

    def contains(self, x):
        try:
            coords = self._coords(x)
        except TypeError:
            return False
        if len(coords) != self.dim:
            return False
        return all(Fraction(c).denominator == 1 and self.lo <= c <= self.hi for c in coords)

    def coerce(self, x):
        if self.dim == 1:
            if isinstance(x, (list, tuple)) and len(x) == 1:
                x = x[0]
            value = _as_rational(x)
            value = int(value) if value.denominator == 1 else value
        else:
            value = RationalVector(_as_rational(c) for c in x)
        if not self.contains(value):
            raise ValueError(f"{x!r} is not a point of {self.describe()}")
        return value

    @staticmethod
    def sort_key(x):
        return x

    def same_group(self, other):
        return isinstance(other, Lattice) and other.dim == self.dim

    def sum_window(self, other):
        return Lattice(self.dim, self.lo + other.lo, self.hi + other.hi)

    def difference_window(self, other):
        return Lattice(self.dim, self.lo - other.hi, self.hi - other.lo)

    def hull(self, other):
        return Lattice(self.dim, min(self.lo, other.lo), max(self.hi, other.hi))

    @property
    def elements(self):
        ranges = [range(self.lo, self.hi + 1)] * self.dim
        if self.dim == 1:
            return list(ranges[0])
        return [RationalVector(p) for p in itertools.product(*ranges)]

    def describe(self):
        return f"Z^{self.dim} window [{self.lo}, {self.hi}]"

    def to_json(self):
        return {"kind": "lattice", "dim": self.dim, "lo": self.lo, "hi": self.hi}

    def __repr__(self):
        return f"Lattice({self.dim}, {self.lo}, {self.hi})"


class Universe:
    """Finite grid ``{lo + k*step} ∩ [lo, hi]`` in every coordinate."""

    def __init__(self, lo, hi, step):
        self.lo, self.hi, self.step = _as_rational(lo), _as_rational(hi), _as_rational(step)
        if self.step <= 0 or self.lo > self.hi:
            raise InvalidOrderError("universe grid needs step > 0 and lo <= hi")
        count = (self.hi - self.lo) / self.step
        self.count = int(count) + 1

    def axis(self):
        return [self.lo + k * self.step for k in range(self.count)]

    def on_boundary(self, value):
        return value - self.step < self.lo or value + self.step > self.hi

    def __eq__(self, other):
        return isinstance(other, Universe) and (self.lo, self.hi, self.step) == (other.lo, other.hi, other.step)

    def __hash__(self):
        return hash((self.lo, self.hi, self.step))

    def to_json(self):
        return {"lo": str(self.lo), "hi": str(self.hi), "step": str(self.step)}


class RationalSpace:
    """The vector space Q^d with an optional declared finite universe grid."""

    kind = "rational"
    is_vector = True
    is_abelian = True

    def __init__(self, dim, universe=None):
        if not isinstance(dim, int) or dim < 1:
            raise InvalidOrderError(f"dimension must be positive, got {dim!r}")
        self.dim = dim
        self.universe = universe
        self.identity = Fraction(0) if dim == 1 else RationalVector([0] * dim)

    def __eq__(self, other):
        return isinstance(other, RationalSpace) and (self.dim, self.universe) == (other.dim, other.universe)

    def __hash__(self):
        return hash(("rational", self.dim, self.universe))

    @staticmethod
    def op(x, y):
        return x + y

    @staticmethod
    def inv(x):
        return -x

    def scale(self, c, x):
        return c * x

    def contains(self, x):
        if self.dim == 1:
            return isinstance(x, (int, Fraction)) and not isinstance(x, bool)
        return isinstance(x, RationalVector) and len(x) == self.dim

    def coerce(self, x):
        if self.dim == 1:
            if isinstance(x, (list, tuple)) and len(x) == 1:
                x = x[0]
            return _as_rational(x)
        if len(x) != self.dim:
            raise ValueError(f"{x!r} does not have dimension {self.dim}")
        return RationalVector(_as_rational(c) for c in x)

    def coords(self, x):
        return (x,) if self.dim == 1 else tuple(x)

    def squared_norm(self, x):
        return sum(c * c for c in self.coords(x))

    @staticmethod
    def sort_key(x):
        return x

    def same_group(self, other):
        return isinstance(other, RationalSpace) and other.dim == self.dim

    def grid(self):
        if self.universe is None:
            raise ValueError("no finite universe declared for this space")
        axis = self.universe.axis()
        if self.dim == 1:
            return axis
        return [RationalVector(p) for p in itertools.product(axis, repeat=self.dim)]

    def describe(self):
        return f"Q^{self.dim}"

    def to_json(self):
        out = {"kind": "rational", "dim": self.dim}
        if self.universe is not None:
            out["universe"] = self.universe.to_json()
        return out

    def __repr__(self):
        return f"RationalSpace({self.dim})"


def finite_elements(carrier):
    """Elements of a finite group or lattice window, or the declared grid of a rational space."""
    if isinstance(carrier, RationalSpace):
        return list(carrier.grid())
    return list(carrier.elements)


def check_same_carrier(*carriers):
    first = carriers[0]
    for other in carriers[1:]:
        if not first.same_group(other):
            raise CarrierMismatchError(f"{first.describe()} and {other.describe()} are different carriers")


def carrier_from_json(obj):
    kind = obj.get("kind")
    if kind == "cyclic":
        return make_cyclic(obj["n"])
    if kind == "product":
        return make_product(*obj["orders"])
    if kind == "dihedral":
        return make_dihedral(obj["n"])
    if kind == "symmetric":
        return make_symmetric(obj["n"])
    if kind == "table":
        return FiniteGroup(obj["labels"], obj["table"])
    if kind == "lattice":
        return Lattice(obj.get("dim", 1), obj["lo"], obj["hi"])
    if kind == "rational":
        universe = obj.get("universe")
        if universe is not None:
            universe = Universe(universe["lo"], universe["hi"], universe["step"])
        return RationalSpace(obj.get("dim", 1), universe)
    raise ValueError(f"unknown carrier kind {kind!r}")


def generated_subgroup(g, generators):
    members = {g.identity}
    frontier = [g.identity]
    gens = list(generators)
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = g.table[x][s]
            if y not in members:
                members.add(y)
                frontier.append(y)
    return frozenset(members)


def subgroups(g):
    """All subgroups of a finite group, as frozensets of element indices."""
    found = {frozenset([g.identity])}
    frontier = list(found)
    while frontier:
        h = frontier.pop()
        for x in g.elements:
            if x in h:
                continue
            bigger = generated_subgroup(g, list(h) + [x])
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _is_normal_members(g, members):
    if g.identity not in members:
        return False
    for x in members:
        if g.inverse[x] not in members:
            return False
        for y in members:
            if g.table[x][y] not in members:
                return False
    for a in g.elements:
        a_inv = g.inverse[a]
        for x in members:
            if g.table[g.table[a][x]][a_inv] not in members:
                return False
    return True


def normal_subgroups(g):
    return [h for h in subgroups(g) if _is_normal_members(g, h)]


def is_normal_subgroup(g, k):
    """True iff the set ``k`` is a subgroup of ``g`` closed under conjugation."""
    if not isinstance(g, FiniteGroup) or not g.same_group(k.carrier):
        raise CarrierMismatchError("subgroup candidate lives on a different carrier")
    return _is_normal_members(g, frozenset(k.members))


def center(g):
    return frozenset(
        x for x in g.elements if all(g.table[x][y] == g.table[y][x] for y in g.elements)
    )
