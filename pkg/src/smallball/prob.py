"""Exact finite-support probability and the probabilistic small-ball bounds.

Distributions carry exact rational weights.  Convolutions run on integer
numerators over a common denominator, so every probability below is an
exact ``Fraction`` and every verdict is an exact comparison.
"""

from __future__ import annotations

import bisect
import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .canon import digest, rational_str
from .errors import RejectedInputError, UnsupportedCarrierError
from .groups import (
    FiniteGroup,
    Lattice,
    RationalSpace,
    RationalVector,
    carrier_from_json,
    check_same_carrier,
    is_normal_subgroup,
)
from .packing import entropy_number, entropy_number_linear
from .reports import FAIL, PASS, VerificationReport, compare, composite
from .sets import encode_element, minkowski_sum, set_minus

KATONA_TOLERANCE = 1e-12


class FiniteDist:
    """A distribution with finitely many atoms and exact rational weights."""

    def __init__(self, carrier, support, weights):
        mass = defaultdict(Fraction)
        for x, w in zip(support, weights, strict=True):
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} at {x!r}")
            if w:
                mass[carrier.coerce(x)] += w
        total = sum(mass.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        self.carrier = carrier
        self.support = tuple(sorted(mass, key=carrier.sort_key))
        self.weights = tuple(mass[x] for x in self.support)

    @classmethod
    def _trusted(cls, carrier, mapping):
        d = cls.__new__(cls)
        d.carrier = carrier
        d.support = tuple(sorted((x for x, w in mapping.items() if w), key=carrier.sort_key))
        d.weights = tuple(mapping[x] for x in d.support)
        return d

    @classmethod
    def from_mapping(cls, carrier, mapping):
        return cls(carrier, list(mapping), list(mapping.values()))

    @classmethod
    def uniform(cls, carrier, points):
        points = list(points)
        return cls(carrier, points, [Fraction(1, len(points))] * len(points))

    @classmethod
    def point_mass(cls, carrier, x):
        return cls(carrier, [x], [1])

    @property
    def mapping(self):
        return dict(zip(self.support, self.weights))

    def weight(self, x):
        return self.mapping.get(x, Fraction(0))

    def items(self):
        return zip(self.support, self.weights)

    def integer_weights(self):
        """``(numerators, denominator)`` with ``weights = numerators / denominator``."""
        den = reduce(math.lcm, (w.denominator for w in self.weights), 1)
        return [w.numerator * (den // w.denominator) for w in self.weights], den

    def __eq__(self, other):
        return (
            isinstance(other, FiniteDist)
            and self.carrier.same_group(other.carrier)
            and self.support == other.support
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.support, self.weights))

    def __repr__(self):
        body = ", ".join(f"{x}: {w}" for x, w in list(self.items())[:8])
        return f"FiniteDist({{{body}{', ...' if len(self.support) > 8 else ''}}})"

    def to_json(self):
        return {
            "carrier": self.carrier.to_json(),
            "support": [encode_element(x) for x in self.support],
            "weights": [rational_str(w) for w in self.weights],
        }

    @classmethod
    def from_json(cls, obj, carrier=None):
        if "carrier" in obj:
            carrier = carrier_from_json(obj["carrier"])
        if carrier is None:
            raise ValueError("distribution JSON has no carrier")
        support = [_decode(carrier, s) for s in obj["support"]]
        return cls(carrier, support, [Fraction(str(w)) for w in obj["weights"]])


def _decode(carrier, s):
    if isinstance(carrier, FiniteGroup):
        return s if isinstance(s, int) else carrier.coerce(s)
    if isinstance(s, list):
        return [Fraction(str(c)) for c in s]
    return Fraction(str(s))


@dataclass(frozen=True)
class HistogramDensity:
    """Piecewise-constant density on ``[origin + i*width, origin + (i+1)*width)``."""

    origin: Fraction
    width: Fraction
    masses: tuple

    def __init__(self, origin, width, masses):
        width = Fraction(width)
        if width <= 0:
            raise ValueError("histogram bin width must be positive")
        masses = tuple(Fraction(m) for m in masses)
        if any(m < 0 for m in masses):
            raise ValueError("bin masses must be nonnegative")
        if sum(masses, Fraction(0)) != 1:
            raise ValueError("bin masses must sum to 1")
        object.__setattr__(self, "origin", Fraction(origin))
        object.__setattr__(self, "width", width)
        object.__setattr__(self, "masses", masses)

    def density(self, i):
        return self.masses[i] / self.width

    def to_json(self):
        return {
            "origin": rational_str(self.origin),
            "width": rational_str(self.width),
            "masses": [rational_str(m) for m in self.masses],
        }


def _combiner(carrier, variant, a=None, b=None):
    op, inv = carrier.op, carrier.inv
    if variant in ("sum", "diff") and not carrier.is_abelian:
        raise UnsupportedCarrierError(f"variant {variant!r} needs an abelian carrier; use product or ratio")
    if variant in ("sum", "product"):
        return op
    if variant in ("diff", "ratio"):
        return lambda u, v: op(u, inv(v))
    if variant == "linear":
        if not isinstance(carrier, RationalSpace):
            raise UnsupportedCarrierError("linear combinations need a rational vector space")
        a, b = Fraction(a), Fraction(b)
        if a == 0 or b == 0:
            raise RejectedInputError("coefficients must be nonzero")
        return lambda u, v: a * u + b * v
    raise ValueError(f"unknown variant {variant!r}")


def _result_carrier(x, y, variant):
    c = x.carrier
    if not isinstance(c, Lattice):
        return c
    if variant in ("sum", "product"):
        return c.sum_window(y.carrier)
    return c.difference_window(y.carrier)


def dist_sum(x, y, variant="sum", a=None, b=None):
    """Law of ``X+Y``, ``X-Y``, ``aX+bY``, ``XY`` or ``XY^-1`` for independent ``X, Y``."""
    check_same_carrier(x.carrier, y.carrier)
    combine = _combiner(x.carrier, variant, a, b)
    nx, dx = x.integer_weights()
    ny, dy = y.integer_weights()
    acc = defaultdict(int)
    for u, cu in zip(x.support, nx):
        for v, cv in zip(y.support, ny):
            acc[combine(u, v)] += cu * cv
    total = dx * dy
    return FiniteDist._trusted(_result_carrier(x, y, variant), {z: Fraction(c, total) for z, c in acc.items()})


def symmetrized(x):
    """Law of ``X - X'`` for an independent copy ``X'``."""
    return dist_sum(x, x, "diff" if x.carrier.is_abelian else "ratio")


def small_ball(d, f):
    """``P(D in F)``."""
    check_same_carrier(d.carrier, f.carrier)
    return sum((w for x, w in d.items() if x in f), Fraction(0))


def concentration(d, f):
    """``Q(D, F) = max_x P(D in x*F)``; only translates meeting the support matter."""
    check_same_carrier(d.carrier, f.carrier)
    if len(f) == 0:
        return Fraction(0)
    op, inv = d.carrier.op, d.carrier.inv
    inverses = [inv(y) for y in f.members]
    acc = defaultdict(Fraction)
    for s, w in d.items():
        for yi in inverses:
            acc[op(s, yi)] += w
    return max(acc.values())


def tuple_probability(x, f):
    """``P((X_1, ..., X_k) in f)`` for i.i.d. copies of ``X``; ``f`` is a set of tuples."""
    mapping = x.mapping
    total = Fraction(0)
    for tup in set(tuple(t) for t in f):
        p = Fraction(1)
        for v in tup:
            p *= mapping.get(x.carrier.coerce(v), Fraction(0))
            if not p:
                break
        total += p
    return total


def _uniform_below(rng, bound, size):
    if bound < 2**62:
        return [int(v) for v in rng.integers(0, bound, size=size)]
    nbytes = (bound.bit_length() + 7) // 8
    out = []
    while len(out) < size:
        v = int.from_bytes(rng.bytes(nbytes), "little") >> (8 * nbytes - bound.bit_length())
        if v < bound:
            out.append(v)
    return out


def sample_indices(x, size, rng):
    """``size`` i.i.d. support indices drawn exactly from the rational weights."""
    nums, den = x.integer_weights()
    cumulative = list(itertools.accumulate(nums))
    return [bisect.bisect_right(cumulative, u) for u in _uniform_below(rng, den, size)]


def _require_admissible(k):
    if not k.is_symmetric:
        raise RejectedInputError("K must be symmetric")
    if not k.contains_identity:
        raise RejectedInputError("K must contain the identity")


def _require_abelian(carrier):
    if not carrier.is_abelian:
        raise RejectedInputError("this bound is stated for abelian carriers; use the nonabelian variant")


def _report(theorem, lhs, rhs, constant, inputs, notes=(), tolerance=0.0):
    status = compare(lhs, rhs, tolerance)
    witness = {"lhs": lhs, "rhs": rhs} if status == FAIL else None
    return VerificationReport(
        theorem=theorem,
        lhs=lhs,
        rhs=rhs,
        constant=constant,
        status=status,
        tolerance=tolerance,
        digest=digest(inputs),
        notes=tuple(notes),
        witness=witness,
    )


def verify_sum_diff(x, f, k):
    """``P(X+Y in F) <= N(F, K) P(X-Y in K)`` for i.i.d. ``X, Y``."""
    check_same_carrier(x.carrier, f.carrier, k.carrier)
    _require_abelian(x.carrier)
    _require_admissible(k)
    n = entropy_number(f, k)
    lhs = small_ball(dist_sum(x, x, "sum"), f)
    p_k = small_ball(dist_sum(x, x, "diff"), k)
    return _report("3.2", lhs, n * p_k, n, {"x": x, "f": f, "k": k}, [f"P(X-Y in K) = {p_k}"])


def verify_diff_diff(x, f, k):
    """``P(X-Y in F) <= (1 + N(F minus K, K)) P(X-Y in K)``."""
    check_same_carrier(x.carrier, f.carrier, k.carrier)
    _require_abelian(x.carrier)
    _require_admissible(k)
    constant = 1 + entropy_number(set_minus(f, k), k)
    diff = dist_sum(x, x, "diff")
    p_k = small_ball(diff, k)
    return _report(
        "3.4",
        small_ball(diff, f),
        constant * p_k,
        constant,
        {"x": x, "f": f, "k": k},
        ["constant is 1 + N(F minus K, K)", f"P(X-Y in K) = {p_k}"],
    )


def _squared_norm(x):
    coords = tuple(x) if isinstance(x, RationalVector) else (x,)
    return sum((Fraction(c) ** 2 for c in coords), Fraction(0))


def verify_katona(x):
    """``P(||X|| >= 1)^2 <= 2 P(||X+Y|| >= 1)`` for Euclidean rational points.

    Norm tests compare squared norms with 1, so both sides are exact.
    """
    if not isinstance(x.carrier, (RationalSpace, Lattice)):
        raise UnsupportedCarrierError("needs a Euclidean vector carrier")
    p_long = sum((w for v, w in x.items() if _squared_norm(v) >= 1), Fraction(0))
    s = dist_sum(x, x, "sum")
    p_sum = sum((w for v, w in s.items() if _squared_norm(v) >= 1), Fraction(0))
    return _report(
        "3.5",
        p_long * p_long,
        2 * p_sum,
        2,
        {"x": x},
        ["norm membership decided on exact squared norms"],
        tolerance=KATONA_TOLERANCE,
    )


def verify_katona_type(x, f, k):
    """``P(X in F)^2 <= N(F, K) P(X-Y in K)``."""
    check_same_carrier(x.carrier, f.carrier, k.carrier)
    _require_admissible(k)
    n = entropy_number(f, k)
    p_f = small_ball(x, f)
    p_k = small_ball(symmetrized(x), k)
    return _report("3.7", p_f * p_f, n * p_k, n, {"x": x, "f": f, "k": k}, [f"P(X in F) = {p_f}"])


def verify_nonabelian(x, f, k, variant="prod"):
    """``P(XY in F) <= N(F, K) P(XY^-1 in K)`` (``prod``) or
    ``P(XY^-1 in F) <= (1 + N(F minus K, K)) P(XY^-1 in K)`` (``ratio``),
    for a normal subgroup ``K``."""
    check_same_carrier(x.carrier, f.carrier, k.carrier)
    if not isinstance(x.carrier, FiniteGroup):
        raise UnsupportedCarrierError("the normal-subgroup bounds need a finite group carrier")
    if not is_normal_subgroup(x.carrier, k):
        raise RejectedInputError("K must be a normal subgroup")
    ratio = dist_sum(x, x, "ratio")
    p_k = small_ball(ratio, k)
    inputs = {"x": x, "f": f, "k": k, "variant": variant}
    if variant == "prod":
        n = entropy_number(f, k)
        return _report("4.2", small_ball(dist_sum(x, x, "product"), f), n * p_k, n, inputs)
    if variant == "ratio":
        constant = 1 + entropy_number(set_minus(f, k), k)
        return _report("4.4", small_ball(ratio, f), constant * p_k, constant, inputs)
    raise ValueError(f"variant must be 'prod' or 'ratio', got {variant!r}")


def verify_linear_combi(x, f, k, a, b):
    """``P(aX+bY in F) <= N(a, b, F, K) P(X-Y in K)`` over a rational vector space."""
    check_same_carrier(x.carrier, f.carrier, k.carrier)
    constant = entropy_number_linear(a, b, f, k)
    lhs = small_ball(dist_sum(x, x, "linear", a, b), f)
    p_k = small_ball(dist_sum(x, x, "diff"), k)
    inputs = {"x": x, "f": f, "k": k, "a": Fraction(a), "b": Fraction(b)}
    return _report("5.1", lhs, constant * p_k, constant, inputs)


def _sum_all(dists):
    return reduce(lambda u, v: dist_sum(u, v, "sum"), dists)


def verify_concentration_sums(xs, f, k, iid=False):
    """Concentration of ``X_1 + ... + X_n`` for independent summands.

    Always checks ``Q(S, F)^2 <= N(F+F, K) Q(sum of X_i - X_i', K)``.  With
    ``iid`` also checks ``Q(S, F) <= N(F, K) Q(sum of floor(n/2) symmetrised
    copies, K)``; the empty sum is the point mass at the identity.
    """
    xs = list(xs)
    if not xs:
        raise ValueError("need at least one summand")
    check_same_carrier(*(x.carrier for x in xs), f.carrier, k.carrier)
    _require_abelian(f.carrier)
    _require_admissible(k)
    if iid and any(x != xs[0] for x in xs[1:]):
        raise RejectedInputError("iid requested but the summands differ")
    total = _sum_all(xs)
    q_f = concentration(total, f)
    sym = [symmetrized(x) for x in xs]
    n_ff = entropy_number(minkowski_sum(f, f), k)
    q_sym = concentration(_sum_all(sym), k)
    inputs = {"xs": xs, "f": f, "k": k, "iid": bool(iid)}
    parts = [_report("7.1", q_f * q_f, n_ff * q_sym, n_ff, inputs, ["independent summands, constant N(F+F, K)"])]
    if iid:
        half = len(xs) // 2
        n = entropy_number(f, k)
        if half:
            q_half = concentration(_sum_all(sym[:half]), k)
        else:
            q_half = Fraction(1) if len(k) else Fraction(0)
        parts.append(_report("7.1-iid", q_f, n * q_half, n, inputs, [f"{half} symmetrised summands, constant N(F, K)"]))
    return composite("7.1", parts, digest=digest(inputs))


def verify_q_linear(x, f, k, a, b):
    """``Q(aX+bY, F) <= N(a, b, F, K) Q(X-Y, K)``."""
    check_same_carrier(x.carrier, f.carrier, k.carrier)
    constant = entropy_number_linear(a, b, f, k)
    lhs = concentration(dist_sum(x, x, "linear", a, b), f)
    q_k = concentration(dist_sum(x, x, "diff"), k)
    inputs = {"x": x, "f": f, "k": k, "a": Fraction(a), "b": Fraction(b)}
    return _report("7.1-linear", lhs, constant * q_k, constant, inputs)


RENYI_NOTE = (
    "checks ||f_{X+Y}||_inf <= 2 ||f_{X-Y}||_inf, i.e. h(X+Y) - h(X-Y) >= -log 2 "
    "for the infinity-Renyi entropy h; the variant with +log 2 fails whenever the two sups are equal"
)


@dataclass(frozen=True)
class RenyiComparison:
    sup_sum: Fraction
    sup_diff: Fraction
    status: str

    def __iter__(self):
        return iter((self.sup_sum, self.sup_diff, self.status))

    def report(self, inputs=None):
        return VerificationReport(
            theorem="renyi",
            lhs=self.sup_sum,
            rhs=2 * self.sup_diff,
            constant=2,
            status=self.status,
            digest=digest(inputs) if inputs is not None else "",
            notes=(RENYI_NOTE,),
        )


def renyi_compare(h):
    """Exact sups of the densities of ``X+Y`` and ``X-Y`` for i.i.d. ``X`` with density ``h``.

    Both densities are piecewise linear with breakpoints on the bin grid, so
    the sup is the largest breakpoint value: ``sum_{i+j=k} m_i m_j / w`` for
    the sum and ``sum_i m_i m_{i+k} / w`` for the difference.
    """
    m = h.masses
    n = len(m)
    w = h.width
    sums = [Fraction(0)] * (2 * n - 1)
    diffs = [Fraction(0)] * (2 * n - 1)
    for i in range(n):
        for j in range(n):
            sums[i + j] += m[i] * m[j]
            diffs[i - j + n - 1] += m[i] * m[j]
    sup_sum = max(sums) / w
    sup_diff = max(diffs) / w
    return RenyiComparison(sup_sum, sup_diff, PASS if sup_sum <= 2 * sup_diff else FAIL)


def random_dist(carrier, rng, points, max_support=None, max_weight=9):
    """Random distribution on a random subset of ``points`` with small integer weights."""
    points = list(points)
    size = rng.randint(1, max_support or len(points))
    support = rng.sample(points, min(size, len(points)))
    raw = [rng.randint(1, max_weight) for _ in support]
    total = sum(raw)
    return FiniteDist(carrier, support, [Fraction(r, total) for r in raw])


def random_histogram(rng, max_bins=16, max_weight=9):
    bins = rng.randint(1, max_bins)
    raw = [rng.randint(0, max_weight) for _ in range(bins)]
    if not any(raw):
        raw[rng.randrange(bins)] = 1
    total = sum(raw)
    origin = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
    width = Fraction(rng.randint(1, 6), rng.randint(1, 6))
    return HistogramDensity(origin, width, [Fraction(r, total) for r in raw])


THEOREMS = {
    "3.2": verify_sum_diff,
    "3.4": verify_diff_diff,
    "3.5": verify_katona,
    "3.7": verify_katona_type,
    "4.2": lambda x, f, k: verify_nonabelian(x, f, k, "prod"),
    "4.4": lambda x, f, k: verify_nonabelian(x, f, k, "ratio"),
    "5.1": verify_linear_combi,
    "7.1": verify_concentration_sums,
    "7.1-linear": verify_q_linear,
}
