"""Explicit finite subsets of a carrier and the set algebra on them."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property

from .errors import (
    BoundaryClippedError,
    CarrierMismatchError,
    DegenerateDilationError,
    UnsupportedCarrierError,
)
from .groups import Lattice, RationalSpace, RationalVector, carrier_from_json, check_same_carrier


class GroupSet:
    """An explicit subset of a carrier; members are sorted and distinct."""

    def __init__(self, carrier, members=(), *, trusted=False):
        if trusted:
            ordered = tuple(members)
        else:
            coerced = {carrier.coerce(m) for m in members}
            ordered = tuple(sorted(coerced, key=carrier.sort_key))
        self.carrier = carrier
        self.members = ordered
        self._index = frozenset(ordered)

    @classmethod
    def _build(cls, carrier, members):
        ordered = tuple(sorted(set(members), key=carrier.sort_key))
        return cls(carrier, ordered, trusted=True)

    def __contains__(self, x):
        return x in self._index

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        return (
            isinstance(other, GroupSet)
            and self.carrier.same_group(other.carrier)
            and self.members == other.members
        )

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        shown = ", ".join(str(m) for m in self.members[:12])
        more = ", ..." if len(self.members) > 12 else ""
        return f"GroupSet({{{shown}{more}}})"

    @property
    def as_frozenset(self):
        return self._index

    @cached_property
    def is_symmetric(self):
        inv = self.carrier.inv
        return all(inv(x) in self._index for x in self.members)

    @cached_property
    def contains_identity(self):
        return self.carrier.identity in self._index

    @property
    def is_admissible(self):
        """Symmetric and containing the identity: the K hypothesis of the theorems."""
        return self.is_symmetric and self.contains_identity

    def to_json(self):
        return {"carrier": self.carrier.to_json(), "members": [encode_element(m) for m in self.members]}


def encode_element(x):
    from .canon import rational_str

    if isinstance(x, RationalVector):
        return [rational_str(c) for c in x]
    if isinstance(x, Fraction):
        return rational_str(x)
    return x


def _check(a, b):
    check_same_carrier(a.carrier, b.carrier)


def minkowski_sum(a, b):
    """``{x*y : x in a, y in b}`` (``x+y`` on abelian carriers)."""
    _check(a, b)
    op = a.carrier.op
    carrier = a.carrier.sum_window(b.carrier) if isinstance(a.carrier, Lattice) else a.carrier
    return GroupSet._build(carrier, (op(x, y) for x in a.members for y in b.members))


def difference_set(a, b):
    """``{x*y^-1 : x in a, y in b}`` (``x-y`` on abelian carriers)."""
    _check(a, b)
    op, inv = a.carrier.op, a.carrier.inv
    if isinstance(a.carrier, Lattice):
        carrier = a.carrier.difference_window(b.carrier)
    else:
        carrier = a.carrier
    inverses = [inv(y) for y in b.members]
    return GroupSet._build(carrier, (op(x, yi) for x in a.members for yi in inverses))


def dilate(a, c):
    """Scale every member of a set in a rational vector space by ``c``."""
    if not isinstance(a.carrier, RationalSpace):
        raise UnsupportedCarrierError("dilation needs a rational vector space carrier")
    c = Fraction(c)
    if c == 0:
        raise DegenerateDilationError("dilation by zero collapses the set")
    return GroupSet._build(a.carrier, (c * x for x in a.members))


def set_minus(a, b):
    _check(a, b)
    drop = b.as_frozenset
    return GroupSet(a.carrier, [x for x in a.members if x not in drop], trusted=True)


def set_union(a, b):
    _check(a, b)
    carrier = a.carrier.hull(b.carrier) if isinstance(a.carrier, Lattice) else a.carrier
    return GroupSet._build(carrier, itertools.chain(a.members, b.members))


def set_intersection(a, b):
    _check(a, b)
    keep = b.as_frozenset
    return GroupSet(a.carrier, [x for x in a.members if x in keep], trusted=True)


def translate(a, x, side="left"):
    """Translate by ``x``: ``x*a`` for ``side="left"``, ``a*x`` for ``side="right"``."""
    carrier = a.carrier
    if isinstance(carrier, Lattice):
        x = Lattice(carrier.dim, -(10**18), 10**18).coerce(x)
        shift = _coords(x)
        carrier = Lattice(carrier.dim, carrier.lo + min(shift), carrier.hi + max(shift))
    else:
        x = carrier.coerce(x)
    op = carrier.op
    if side == "left":
        members = (op(x, y) for y in a.members)
    elif side == "right":
        members = (op(y, x) for y in a.members)
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return GroupSet._build(carrier, members)


def _coords(x):
    return tuple(x) if isinstance(x, RationalVector) else (x,)


def invert(a):
    inv = a.carrier.inv
    carrier = a.carrier
    if isinstance(carrier, Lattice):
        carrier = Lattice(carrier.dim, -carrier.hi, -carrier.lo)
    return GroupSet._build(carrier, (inv(x) for x in a.members))


def full_set(carrier):
    """Every element of a finite carrier (finite group or lattice window)."""
    if isinstance(carrier, Lattice):
        return GroupSet._build(carrier, carrier.elements)
    if isinstance(carrier, RationalSpace):
        return GroupSet._build(carrier, carrier.grid())
    return GroupSet(carrier, range(carrier.order), trusted=True)


def interval(carrier, lo, hi, *, over=None):
    """The closed interval ``[lo, hi]`` materialised on a one-dimensional carrier.

    On a rational line the interval is intersected with ``over`` when given,
    otherwise with the declared universe grid, which must extend strictly past
    both ends of the interval.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if carrier.dim != 1:
        raise UnsupportedCarrierError("intervals live on one-dimensional carriers")
    if isinstance(carrier, Lattice):
        ilo, ihi = math.ceil(lo), math.floor(hi)
        window = carrier.hull(Lattice(1, min(ilo, ihi), max(ilo, ihi)))
        return GroupSet._build(window, range(ilo, ihi + 1))
    if not isinstance(carrier, RationalSpace):
        raise UnsupportedCarrierError("intervals need a lattice or rational carrier")
    if over is not None:
        return GroupSet._build(carrier, (x for x in over if lo <= x <= hi))
    universe = _require_universe(carrier)
    if lo <= universe.lo or hi >= universe.hi:
        raise BoundaryClippedError(
            f"interval [{lo}, {hi}] touches the universe boundary [{universe.lo}, {universe.hi}]"
        )
    return GroupSet._build(carrier, (x for x in universe.axis() if lo <= x <= hi))


def _require_universe(carrier):
    if carrier.universe is None:
        raise BoundaryClippedError("no universe declared; cannot materialise a continuum set")
    return carrier.universe


NORMS = ("l1", "l2", "linf")


def within_ball(offset_coords, radius, norm):
    """Exact test ``||offset|| <= radius`` for rational coordinates."""
    if norm == "l1":
        return sum(abs(c) for c in offset_coords) <= radius
    if norm == "l2":
        return sum(c * c for c in offset_coords) <= radius * radius
    if norm == "linf":
        return max(abs(c) for c in offset_coords) <= radius
    raise ValueError(f"unknown norm {norm!r}; expected one of {NORMS}")


def ball(carrier, radius, *, norm="l2", center=None, over=None):
    """Closed ball materialised on the carrier's finite universe (or on ``over``)."""
    radius = Fraction(radius)
    if norm not in NORMS:
        raise ValueError(f"unknown norm {norm!r}; expected one of {NORMS}")
    dim = carrier.dim
    if center is None:
        center = carrier.identity
    center_coords = tuple(Fraction(c) for c in _coords(center))

    def keep(x):
        return within_ball([a - c for a, c in zip(_coords(x), center_coords)], radius, norm)

    if over is not None:
        return GroupSet._build(carrier, (x for x in over if keep(x)))
    if isinstance(carrier, Lattice):
        ranges = [range(math.ceil(c - radius), math.floor(c + radius) + 1) for c in center_coords]
        if dim == 1:
            pts = list(ranges[0])
            lo, hi = pts[0], pts[-1]
        else:
            pts = [RationalVector(p) for p in itertools.product(*ranges)]
            lo = min(r.start for r in ranges)
            hi = max(r.stop - 1 for r in ranges)
        window = carrier.hull(Lattice(dim, lo, hi))
        return GroupSet._build(window, (p for p in pts if keep(p)))
    if not isinstance(carrier, RationalSpace):
        raise UnsupportedCarrierError("balls need a lattice or rational vector carrier")
    universe = _require_universe(carrier)
    for c in center_coords:
        if c - radius <= universe.lo or c + radius >= universe.hi:
            raise BoundaryClippedError(
                f"ball of radius {radius} around {center} touches the universe boundary"
            )
    axis = [x for x in universe.axis()]
    if dim == 1:
        candidates = axis
    else:
        per_axis = [[x for x in axis if c - radius <= x <= c + radius] for c in center_coords]
        candidates = [RationalVector(p) for p in itertools.product(*per_axis)]
    return GroupSet._build(carrier, (x for x in candidates if keep(x)))


def set_from_json(obj, carrier=None):
    """Load a set from its JSON form; accepts the interval and ball shorthands."""
    if "carrier" in obj:
        carrier = carrier_from_json(obj["carrier"])
    if carrier is None:
        raise CarrierMismatchError("set description has no carrier")
    if "members" in obj:
        return GroupSet(carrier, [_decode_element(carrier, m) for m in obj["members"]])
    if "interval" in obj:
        lo, hi = obj["interval"]
        return interval(carrier, Fraction(str(lo)), Fraction(str(hi)))
    if "ball" in obj:
        desc = obj["ball"]
        center = desc.get("center")
        if center is not None:
            center = carrier.coerce(_decode_element(carrier, center))
        return ball(carrier, Fraction(str(desc["radius"])), norm=desc.get("norm", "l2"), center=center)
    raise ValueError("set JSON needs 'members', 'interval' or 'ball'")


def _decode_element(carrier, m):
    if isinstance(carrier, (Lattice, RationalSpace)):
        if isinstance(m, list):
            return [Fraction(str(c)) for c in m]
        if isinstance(m, float):
            return Fraction(str(m))
        return Fraction(m) if isinstance(m, str) else m
    return m
