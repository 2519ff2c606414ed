"""Near-extremal distributions and how closely they attain the constants.

Each construction is a uniform distribution on a short rational
progression, so every ratio is exact.  A sweep also materialises the
intervals on the finite sets that matter and runs the matching verifier,
which must agree that the ratio is within the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .canon import to_plain
from .errors import ConstructionParameterError
from .groups import RationalSpace
from .prob import FiniteDist, dist_sum, verify_diff_diff, verify_katona_type, verify_sum_diff
from .sets import GroupSet, difference_set

LINE = RationalSpace(1)
DELTA_FACTOR = Fraction(1001, 1000)
DEFAULT_EPS = Fraction(1, 100)


def _q(v):
    return Fraction(str(v)) if isinstance(v, float) else Fraction(v)


def default_delta(a):
    return _q(a) * DELTA_FACTOR


def dll_construction(n, a=1, b=None, delta=None, r=None):
    """Uniform on ``{-(n-1)d - r, ..., -d - r, d, 2d, ..., n d}`` with ``d = delta``.

    ``b`` is accepted for symmetry with the probe and plays no role in the
    support.  Defaults are ``delta = a(1 + 1/1000)`` and ``r = delta/2``.
    """
    a = _q(a)
    delta = default_delta(a) if delta is None else _q(delta)
    r = delta / 2 if r is None else _q(r)
    if n < 1:
        raise ConstructionParameterError("n must be at least 1")
    if delta <= a:
        raise ConstructionParameterError(f"delta = {delta} must exceed a = {a}")
    if r <= 0:
        raise ConstructionParameterError("the shift r must be positive")
    points = [-k * delta - r for k in range(1, n)] + [k * delta for k in range(1, n + 1)]
    return FiniteDist.uniform(LINE, points)


def ay_construction(n, delta=None, a=1):
    """Uniform on ``{delta, 2 delta, ..., n delta}``."""
    a = _q(a)
    delta = default_delta(a) if delta is None else _q(delta)
    if n < 1:
        raise ConstructionParameterError("n must be at least 1")
    if delta <= 0:
        raise ConstructionParameterError("delta must be positive")
    return FiniteDist.uniform(LINE, [k * delta for k in range(1, n + 1)])


def sym_kat_points(a, b):
    return math.ceil(2 * _q(b) / _q(a))


def sym_kat_construction(n=None, a=1, b=1, eps=DEFAULT_EPS):
    """Uniform on ``{-b + i(1+eps)a : 0 <= i < n}``, with ``n = ceil(2b/a)`` by default.

    Every point must stay inside ``[-b, b]``.
    """
    a, b, eps = _q(a), _q(b), _q(eps)
    if a <= 0 or b <= 0:
        raise ConstructionParameterError("a and b must be positive")
    if eps <= 0:
        raise ConstructionParameterError("eps must be positive")
    n = sym_kat_points(a, b) if n is None else int(n)
    if n < 1:
        raise ConstructionParameterError("need at least one point")
    points = [-b + i * (1 + eps) * a for i in range(n)]
    if points[-1] > b:
        raise ConstructionParameterError(f"point {points[-1]} escapes [-{b}, {b}]; lower eps")
    return FiniteDist.uniform(LINE, points)


def _in_interval(d, c):
    return sum((w for x, w in d.items() if abs(x) <= c), Fraction(0))


def _interval_on(points, c):
    return GroupSet(LINE, [x for x in points if abs(x) <= c], trusted=False)


def _window_k(diff, f, a):
    """``[-a, a]`` restricted to the differences that either side can produce."""
    pts = set(diff.support) | set(difference_set(f, f).members)
    return GroupSet(LINE, [x for x in pts if abs(x) <= a] + [-x for x in pts if abs(x) <= a] + [0])


@dataclass(frozen=True)
class SweepResult:
    n: int
    ratio: Fraction
    constant: object
    gap: Fraction
    verified: bool = True

    def to_json(self):
        return {
            "kind": "sweep",
            "n": self.n,
            "ratio": to_plain(self.ratio),
            "constant": to_plain(self.constant),
            "gap": to_plain(self.gap),
            "verified": self.verified,
        }

    def csv_row(self):
        return [self.n, self.ratio.numerator, self.ratio.denominator, to_plain(self.constant), to_plain(self.gap)]


def probe_dll(n, a, b, **params):
    """``P(|X+Y| <= b) / P(|X-Y| <= a)`` against ``ceil(2b/a)``, cross-checked by the sum bound."""
    x = dll_construction(n, a, b, **params)
    s, d = dist_sum(x, x, "sum"), dist_sum(x, x, "diff")
    ratio = _in_interval(s, b) / _in_interval(d, a)
    f = _interval_on(s.support, b)
    report = verify_sum_diff(x, f, _window_k(d, f, a))
    return ratio, math.ceil(2 * b / a), report


def probe_ay(n, a, b, **params):
    """``P(|X-Y| <= b) / P(|X-Y| <= a)`` against ``2 ceil(b/a) - 1``, cross-checked by the difference bound."""
    x = ay_construction(n, a=a, **params)
    d = dist_sum(x, x, "diff")
    ratio = _in_interval(d, b) / _in_interval(d, a)
    f = _interval_on(d.support, b)
    report = verify_diff_diff(x, f, _window_k(d, f, a))
    return ratio, 2 * math.ceil(b / a) - 1, report


def probe_symkat(n, a, b, **params):
    """``P(|X| <= b)^2 / P(|X-Y| <= a)`` against ``ceil(2b/a)``, cross-checked by the square bound."""
    x = sym_kat_construction(n, a, b, **params)
    d = dist_sum(x, x, "diff")
    p = _in_interval(x, b)
    ratio = p * p / _in_interval(d, a)
    f = _interval_on(x.support, b)
    report = verify_katona_type(x, f, _window_k(d, f, a))
    return ratio, math.ceil(2 * b / a), report


PROBES = {
    ("dll", "3.2"): probe_dll,
    ("ay", "3.4"): probe_ay,
    ("symkat", "3.7"): probe_symkat,
}
DEFAULT_THEOREM = {"dll": "3.2", "ay": "3.4", "symkat": "3.7"}


def tightness_sweep(construction, theorem=None, grid=(), a=1, b=2, **params):
    """Exact ratios of ``construction`` over the ``n`` values in ``grid``.

    Raises :class:`ConstructionParameterError` for a construction that does
    not probe the named bound, and :class:`AssertionError` if a ratio ever
    exceeds its constant or the verifier disagrees.
    """
    theorem = DEFAULT_THEOREM.get(construction) if theorem is None else theorem
    probe = PROBES.get((construction, theorem))
    if probe is None:
        raise ConstructionParameterError(f"construction {construction!r} does not probe theorem {theorem!r}")
    a, b = _q(a), _q(b)
    results = []
    for n in grid:
        ratio, constant, report = probe(n, a, b, **params)
        if ratio > constant or not report.passed or report.constant > constant:
            raise AssertionError(f"ratio {ratio} at n = {n} breaks the bound {constant}: {report}")
        results.append(SweepResult(n, ratio, constant, constant - ratio, report.passed))
    return results


def trend(results):
    """``"single"``, ``"nondecreasing"``, ``"nonincreasing"`` or ``"mixed"`` for the sweep ratios."""
    ratios = [r.ratio for r in results]
    if len(ratios) <= 1:
        return "single"
    steps = list(zip(ratios, ratios[1:]))
    if all(u <= v for u, v in steps):
        return "nondecreasing"
    if all(u >= v for u, v in steps):
        return "nonincreasing"
    return "mixed"
