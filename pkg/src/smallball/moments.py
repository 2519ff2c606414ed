"""Moment inequalities derived from the small-ball bounds.

Finite-support checks evaluate expectations as exact sums (floats only for
roots and transcendental functions) and compare with tolerance ``1e-9``.
The reverse Hölder bound is checked by Monte Carlo with a three-valued
verdict, since sampling noise alone must never produce a failure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .canon import digest
from .errors import RejectedInputError, UnsupportedCarrierError, UnsupportedFunctionError
from .groups import FiniteGroup, Lattice, RationalSpace, RationalVector
from .prob import FiniteDist, dist_sum
from .reports import FAIL, INCONCLUSIVE, PASS, VerificationReport, composite
from .sets import within_ball

TOLERANCE = 1e-9
NORM_ALIASES = {"l1": 1, "l2": 2, "linf": math.inf, "inf": math.inf, 1: 1, 2: 2, math.inf: math.inf}


def _norm_index(p):
    if p in NORM_ALIASES:
        return NORM_ALIASES[p]
    p = float(p)
    if p < 1:
        raise UnsupportedCarrierError(f"l{p} is not a norm")
    return p


def _norm_name(p):
    return "linf" if p == math.inf else f"l{p:g}"


@dataclass(frozen=True)
class NormPair:
    """Two p-norms on R^d: ``first`` measures ``aX+bY`` and ``X``, ``second`` measures ``X-Y``."""

    first: float
    second: float
    dim: int = 1

    def __init__(self, first=2, second=2, dim=1):
        object.__setattr__(self, "first", _norm_index(first))
        object.__setattr__(self, "second", _norm_index(second))
        if not isinstance(dim, int) or dim < 1:
            raise ValueError("dimension must be a positive integer")
        object.__setattr__(self, "dim", dim)

    def norm1(self, coords):
        return lp_norm(coords, self.first)

    def norm2(self, coords):
        return lp_norm(coords, self.second)

    def to_json(self):
        return {"first": _norm_name(self.first), "second": _norm_name(self.second), "dim": self.dim}


def lp_norm(coords, p):
    vals = [abs(float(c)) for c in coords]
    if not vals:
        return 0.0
    if p == math.inf:
        return max(vals)
    if p == 1:
        return math.fsum(vals)
    if p == 2:
        return math.sqrt(math.fsum(v * v for v in vals))
    return math.fsum(v**p for v in vals) ** (1 / p)


def operator_norm(pair):
    """``sup ||x||_second / ||x||_first``: 1 when ``first <= second``, else ``d^(1/second - 1/first)``.

    The value is returned as a ``Fraction`` whenever it is rational.
    """
    s, t, d = pair.first, pair.second, pair.dim
    if s <= t or d == 1:
        return Fraction(1)
    inv_t = 0 if t == math.inf else Fraction(1, int(t)) if float(t).is_integer() else 1 / t
    inv_s = 0 if s == math.inf else Fraction(1, int(s)) if float(s).is_integer() else 1 / s
    exponent = inv_t - inv_s
    if isinstance(exponent, Fraction) and exponent.denominator == 1:
        return Fraction(d) ** exponent.numerator
    return float(d) ** float(exponent)


def _coords(carrier, x):
    if isinstance(carrier, (RationalSpace, Lattice)):
        return tuple(x) if isinstance(x, RationalVector) else (x,)
    raise UnsupportedCarrierError("moment checks need a real vector carrier")


def _moment(d, norm, p):
    """``E ||D||^p`` for a finite distribution; ``0^p`` is taken as 0 for ``p > 0``."""
    total = []
    for x, w in d.items():
        v = norm(_coords(d.carrier, x))
        if v == 0:
            if p < 0:
                raise RejectedInputError("negative moment diverges: an atom sits at the origin")
            continue
        total.append(float(w) * v**p)
    return math.fsum(total)


def _root(m, p):
    return m ** (1 / p) if m > 0 else 0.0


def _float_report(theorem, lhs, rhs, constant, inputs, notes=(), tolerance=TOLERANCE):
    status = PASS if lhs <= rhs + tolerance else FAIL
    return VerificationReport(
        theorem=theorem,
        lhs=lhs,
        rhs=rhs,
        constant=constant,
        status=status,
        tolerance=tolerance,
        digest=digest(inputs),
        notes=tuple(notes),
        witness={"lhs": lhs, "rhs": rhs} if status == FAIL else None,
    )


def holder_check(x, pair, a=1, b=1, p=1, q=1, tolerance=TOLERANCE):
    """``(E||X-Y||_2^p)^{1/p} <= 2||I|| max(1/|a|, 1/|b|) (E||aX+bY||_1^q)^{1/q}``."""
    a, b = Fraction(a), Fraction(b)
    p, q = float(p), float(q)
    if a == 0 or b == 0:
        raise RejectedInputError("coefficients must be nonzero")
    if not (q >= p and p * q > 0):
        raise RejectedInputError("need q >= p and pq > 0")
    diff = dist_sum(x, x, "diff")
    combo = dist_sum(x, x, "linear", a, b) if isinstance(x.carrier, RationalSpace) else None
    if combo is None:
        raise UnsupportedCarrierError("linear combinations need a rational vector space")
    if p < 0 and (diff.weight(x.carrier.identity) or combo.weight(x.carrier.identity)):
        raise RejectedInputError("negative moments diverge: X - Y or aX + bY has an atom at 0")
    op_norm = float(operator_norm(pair))
    constant = 2 * op_norm * float(max(1 / abs(a), 1 / abs(b)))
    lhs = _root(_moment(diff, pair.norm2, p), p)
    rhs = constant * _root(_moment(combo, pair.norm1, q), q)
    inputs = {"x": x, "pair": pair, "a": a, "b": b, "p": p, "q": q}
    return _float_report("holder", lhs, rhs, constant, inputs, [f"||I|| = {op_norm}"], tolerance)


def kh_check(x, pair, p=1, tolerance=TOLERANCE):
    """``(E||X-Y||_2^p)^{1/p} <= 2^{1+1/p} ||I|| (E||X||_1^p)^{1/p}`` for ``p > 0``."""
    p = float(p)
    if p <= 0:
        raise RejectedInputError("this bound needs p > 0")
    op_norm = float(operator_norm(pair))
    constant = 2 ** (1 + 1 / p) * op_norm
    lhs = _root(_moment(dist_sum(x, x, "diff"), pair.norm2, p), p)
    rhs = constant * _root(_moment(x, pair.norm1, p), p)
    inputs = {"x": x, "pair": pair, "p": p}
    return _float_report("kh", lhs, rhs, constant, inputs, [f"||I|| = {op_norm}"], tolerance)


UNIMODAL = ("exp", "gauss", "cauchy", "indicator")


@dataclass(frozen=True)
class UnimodalFunction:
    """A whitelisted symmetric unimodal function of ``||x||``.

    ``exp`` is ``e^{-||x||}``, ``gauss`` is ``e^{-||x||^2}``, ``cauchy`` is
    ``1/(1+||x||^2)`` and ``indicator`` is the indicator of the closed ball
    of radius ``radius``.  The indicator is evaluated exactly.
    """

    name: str
    norm: str = "l2"
    radius: Fraction = Fraction(1)

    def __post_init__(self):
        if self.name not in UNIMODAL:
            raise UnsupportedFunctionError(f"{self.name!r} is not a whitelisted unimodal function {UNIMODAL}")
        if self.norm not in ("l1", "l2", "linf"):
            raise UnsupportedFunctionError(f"unknown norm {self.norm!r}")
        object.__setattr__(self, "radius", Fraction(self.radius))

    def __call__(self, coords):
        if self.name == "indicator":
            return Fraction(1) if within_ball([Fraction(c) for c in coords], self.radius, self.norm) else Fraction(0)
        r = lp_norm(coords, NORM_ALIASES[self.norm])
        if self.name == "exp":
            return math.exp(-r)
        if self.name == "gauss":
            return math.exp(-r * r)
        return 1 / (1 + r * r)

    @classmethod
    def coerce(cls, desc):
        if isinstance(desc, cls):
            return desc
        if isinstance(desc, str):
            return cls(desc)
        return cls(desc["name"], desc.get("norm", "l2"), Fraction(str(desc.get("radius", 1))))

    def to_json(self):
        return {"name": self.name, "norm": self.norm, "radius": str(self.radius)}


def _expect(d, fn, scale=Fraction(1)):
    values = [(w, fn(_coords(d.carrier, scale * x))) for x, w in d.items()]
    if all(isinstance(v, Fraction) for _, v in values):
        return sum((w * v for w, v in values), Fraction(0))
    return math.fsum(float(w) * float(v) for w, v in values)


def unimodal_check(x, phi, a=1, b=1, tolerance=TOLERANCE):
    """``E phi(aX+bY) <= E phi((X-Y) / (2 max(1/|a|, 1/|b|)))``."""
    phi = UnimodalFunction.coerce(phi)
    if not isinstance(x.carrier, RationalSpace):
        raise UnsupportedCarrierError("needs a rational vector space")
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise RejectedInputError("coefficients must be nonzero")
    scale = 1 / (2 * max(1 / abs(a), 1 / abs(b)))
    lhs = _expect(dist_sum(x, x, "linear", a, b), phi)
    rhs = _expect(dist_sum(x, x, "diff"), phi, scale)
    inputs = {"x": x, "phi": phi, "a": a, "b": b}
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        status = PASS if lhs <= rhs else FAIL
        return VerificationReport("unimodal", lhs, rhs, scale, status, 0.0, digest(inputs))
    return _float_report("unimodal", float(lhs), float(rhs), scale, inputs, (), tolerance)


POSDEF = ("character", "exp_power")


@dataclass(frozen=True)
class PositiveDefiniteFunction:
    """A whitelisted positive-definite function normalised to ``phi(0) = 1``.

    ``character`` is a convex combination ``sum_k w_k exp(2 pi i k x / n)``
    of characters of ``Z_n``; ``exp_power`` is ``exp(-(||x||_2 / scale)^power)``
    on ``R^d`` with ``0 < power <= 2``.
    """

    family: str
    n: int = 0
    weights: tuple = ()
    power: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        if self.family not in POSDEF:
            raise UnsupportedFunctionError(f"{self.family!r} is not a whitelisted positive-definite family {POSDEF}")
        if self.family == "character":
            if self.n < 1 or not self.weights:
                raise UnsupportedFunctionError("a character combination needs n >= 1 and weights")
            ws = [Fraction(w) for _, w in self.weights]
            if any(w < 0 for w in ws) or sum(ws) != 1:
                raise UnsupportedFunctionError("character weights must be nonnegative and sum to 1")
        elif not (0 < self.power <= 2) or self.scale <= 0:
            raise UnsupportedFunctionError("exp_power needs 0 < power <= 2 and a positive scale")

    @classmethod
    def cosine(cls, n, k=1):
        """``cos(2 pi k x / n)``, the average of two conjugate characters."""
        weights = {}
        for j in (k % n, -k % n):
            weights[j] = weights.get(j, Fraction(0)) + Fraction(1, 2)
        return cls("character", n, tuple(sorted(weights.items())))

    @classmethod
    def coerce(cls, desc):
        if isinstance(desc, cls):
            return desc
        family = desc["family"]
        if family == "character":
            if "cosine" in desc:
                return cls.cosine(int(desc["n"]), int(desc["cosine"]))
            weights = tuple(sorted((int(k) % int(desc["n"]), Fraction(str(w))) for k, w in desc["weights"].items()))
            return cls("character", int(desc["n"]), weights)
        return cls(family, power=float(desc.get("power", 2)), scale=float(desc.get("scale", 1)))

    def value(self, carrier, x):
        if self.family == "character":
            if not (isinstance(carrier, FiniteGroup) and carrier.name == "cyclic" and carrier.order == self.n):
                raise UnsupportedCarrierError(f"characters of Z_{self.n} need the cyclic group of that order")
            return sum(float(w) * cmath.exp(2j * math.pi * k * x / self.n) for k, w in self.weights)
        r = lp_norm(_coords(carrier, x), 2)
        return complex(math.exp(-((r / self.scale) ** self.power)))

    def to_json(self):
        if self.family == "character":
            return {"family": "character", "n": self.n, "weights": {str(k): str(w) for k, w in self.weights}}
        return {"family": self.family, "power": self.power, "scale": self.scale}


def _multiple(carrier, m, x):
    if isinstance(carrier, FiniteGroup):
        base = x if m >= 0 else carrier.inv(x)
        out = carrier.identity
        for _ in range(abs(m)):
            out = carrier.op(out, base)
        return out
    return m * x


def _scaled(d, m):
    mapping = {}
    for x, w in d.items():
        z = _multiple(d.carrier, m, x)
        mapping[z] = mapping.get(z, Fraction(0)) + w
    return FiniteDist._trusted(d.carrier, mapping)


def _expect_complex(d, phi):
    return sum((float(w) * phi.value(d.carrier, x) for x, w in d.items()), 0j)


def posdef_check(x, y, phi, m=1, n=1, tolerance=TOLERANCE):
    """``|E phi(mX+nY)|^2 <= E phi(mX-mX') E phi(nY-nY')`` plus two corollaries.

    The corollaries are ``|E phi(X+X')| <= E phi(X-X')`` and
    ``|E phi(X)|^2 <= phi(0) E phi(X-X')``.
    """
    phi = PositiveDefiniteFunction.coerce(phi)
    if not x.carrier.is_abelian:
        raise UnsupportedCarrierError("positive-definite checks need an abelian carrier")
    m, n = int(m), int(n)
    mx, ny = _scaled(x, m), _scaled(y, n)
    inputs = {"x": x, "y": y, "phi": phi, "m": m, "n": n}
    notes = ("complex modulus compared with tolerance",)
    lhs = abs(_expect_complex(dist_sum(mx, ny, "sum"), phi)) ** 2
    rhs = (_expect_complex(dist_sum(mx, mx, "diff"), phi) * _expect_complex(dist_sum(ny, ny, "diff"), phi)).real
    parts = [_float_report("posdef", lhs, rhs, 1, inputs, notes, tolerance)]
    sym = _expect_complex(dist_sum(x, x, "diff"), phi).real
    parts.append(_float_report("posdef-iid", abs(_expect_complex(dist_sum(x, x, "sum"), phi)), sym, 1, inputs, notes, tolerance))
    phi0 = phi.value(x.carrier, x.carrier.identity).real
    parts.append(_float_report("posdef-single", abs(_expect_complex(x, phi)) ** 2, phi0 * sym, phi0, inputs, notes, tolerance))
    return composite("posdef", parts, digest=digest(inputs))


def _packing_bound(c, ratio, pair):
    """Upper bound for ``N(c^-1 B_1(r_1), B_2(r_2))`` with ``ratio = r_1 / r_2``.

    In one dimension the count of points of ``[-r_1/|c|, r_1/|c|]`` with gaps
    above ``r_2`` is exact; otherwise a volume comparison of ``r_2/2``-balls.
    """
    span = 2 * Fraction(ratio) / abs(Fraction(c))
    if pair.dim == 1:
        return max(1, math.ceil(span))
    reach = float(operator_norm(pair)) * float(span)
    return math.floor((1 + reach) ** pair.dim + 1e-9)


def _positive_factor(q, delta):
    tail = math.gamma(q + 1) * math.sqrt(delta) * (-math.log(delta) / 2) ** (-q)
    return (1 + tail) ** (1 / q)


@lru_cache(maxsize=64)
def _best_exponent(delta, lo=1e-3, hi=64.0):
    """Minimiser of ``_positive_factor(., delta)``, a unimodal function of ``q``.

    Moments of ``||X-Y||`` grow with the exponent, so a constant valid at
    ``q' >= q`` is valid at ``q``; taking the best ``q' >= q`` makes the
    reported constant nondecreasing in ``q``.
    """
    f = lambda t: _positive_factor(math.exp(t), delta)  # noqa: E731
    a, b = math.log(lo), math.log(hi)
    g = (math.sqrt(5) - 1) / 2
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(200):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return math.exp((a + b) / 2)


@dataclass(frozen=True)
class ReverseHolderTrace:
    branch: str
    r1: float
    r2: float
    n_bound: object
    delta: float
    constant: float
    notes: tuple = field(default=())
    q_used: float | None = None

    def to_json(self):
        return {
            "branch": self.branch,
            "q_used": self.q_used,
            "r1": self.r1,
            "r2": self.r2,
            "n_bound": str(self.n_bound) if isinstance(self.n_bound, Fraction) else self.n_bound,
            "delta": self.delta,
            "constant": self.constant,
            "notes": list(self.notes),
        }


def reverse_holder_constant(a, b, p, q, pair=None, d=None):
    """One explicit constant ``C`` with ``(E||X-Y||_2^q)^{1/q} <= C (E||aX+bY||_1^p)^{1/p}``.

    For ``q >= p > 0`` the trace uses ``r_1 = r_2 = 2^{1/p}``, so the
    Chebyshev mass is ``1/2``.  For ``-1 < p <= q < 0`` it uses
    ``r_1 = r_2 = (2N)^{1/q}``, so that ``N r_2^{-q} = 1/2``.  When one
    coefficient is zero the square-probability bound replaces the linear one:
    the mass is squared and ``N`` counts the single dilated ball.
    """
    pair = pair or NormPair(2, 2, d or 1)
    if d is not None and d != pair.dim:
        pair = NormPair(pair.first, pair.second, d)
    a, b = Fraction(a), Fraction(b)
    p, q = float(p), float(q)
    if a == 0 and b == 0:
        raise RejectedInputError("at least one coefficient must be nonzero")
    positive = q >= p > 0
    negative = -1 < p <= q < 0
    if not (positive or negative):
        raise RejectedInputError("need q >= p > 0 or -1 < p <= q < 0")
    single = a == 0 or b == 0
    if single:
        c = a if a != 0 else b
        n_bound = _packing_bound(c, Fraction(1), pair)
    else:
        n_bound = Fraction(_packing_bound(a, Fraction(1), pair) + _packing_bound(b, Fraction(1), pair), 2)
    notes = ["one admissible choice of the free radii r1, r2"]
    if single:
        notes.append("one coefficient is zero: squared Chebyshev mass, single packing number")
    nf = float(n_bound)
    if positive:
        r1 = r2 = 2 ** (1 / p)
        mass = 1 - r1 ** (-p)
        if single:
            mass *= mass
        delta = 1 - mass / nf
        q_used = max(q, _best_exponent(delta))
        if q_used > q:
            notes.append(f"evaluated at q = {q_used:.6g}: the bound at a larger exponent implies it at q")
        constant = r2 * _positive_factor(q_used, delta)
        return ReverseHolderTrace("positive", r1, r2, n_bound, delta, constant, tuple(notes), q_used)
    target = Fraction(1, 4) if single else Fraction(1, 2)
    # r_2^{-q} N = target (squared-mass case: sqrt(N r_2^{-q}) = 1/2)
    r2 = (float(target) / nf) ** (1 / -q)
    r1 = r2
    hit = math.sqrt(nf * r2 ** (-q)) if single else nf * r2 ** (-q)
    delta = hit
    inner = 1 + (2 * p / (1 + p)) * math.log(1 - hit)
    constant = 1 / (r1 * inner ** (1 / p))
    return ReverseHolderTrace("negative", r1, r2, n_bound, delta, constant, tuple(notes), q)


FAMILIES = ("gaussian", "exponential-symmetric", "uniform-on-box")


@dataclass(frozen=True)
class LogConcaveSampler:
    """Reproducible i.i.d. sampler for a log-concave family on ``R^dim``.

    ``gaussian`` takes ``scale`` (standard deviation), ``exponential-symmetric``
    takes ``scale`` (Laplace), ``uniform-on-box`` takes ``lo`` and ``hi``.
    """

    family: str
    dim: int = 1
    params: tuple = ()
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedFunctionError(f"unknown log-concave family {self.family!r}; expected one of {FAMILIES}")
        if isinstance(self.params, dict):
            object.__setattr__(self, "params", tuple(sorted(self.params.items())))

    @property
    def options(self):
        return dict(self.params)

    def draw(self, rng, size):
        opts = self.options
        shape = (size, self.dim)
        if self.family == "gaussian":
            return rng.normal(0.0, float(opts.get("scale", 1.0)), shape)
        if self.family == "exponential-symmetric":
            return rng.laplace(0.0, float(opts.get("scale", 1.0)), shape)
        return rng.uniform(float(opts.get("lo", 0.0)), float(opts.get("hi", 1.0)), shape)

    def diff_moment(self, q):
        """Closed form of ``E|X-Y|^q`` in one dimension where known, else ``None``."""
        if self.dim != 1 or q <= -1:
            return None
        opts = self.options
        if self.family == "gaussian":
            s = float(opts.get("scale", 1.0))
            # X - Y ~ N(0, 2 s^2)
            return (2 * s * s) ** (q / 2) * 2 ** (q / 2) * math.gamma((q + 1) / 2) / math.sqrt(math.pi)
        if self.family == "uniform-on-box" and q > -1:
            width = float(opts.get("hi", 1.0)) - float(opts.get("lo", 0.0))
            return 2 * width**q / ((q + 1) * (q + 2))
        return None

    def to_json(self):
        return {"family": self.family, "dim": self.dim, "params": dict(self.params), "seed": self.seed}


@dataclass
class _Stats:
    count: int = 0
    total: float = 0.0
    squares: float = 0.0

    def add(self, values):
        self.count += len(values)
        self.total += float(np.sum(values))
        self.squares += float(np.sum(values * values))

    @property
    def mean(self):
        return self.total / self.count

    @property
    def stderr(self):
        if self.count < 2:
            return math.inf
        var = max(0.0, (self.squares - self.count * self.mean**2) / (self.count - 1))
        return math.sqrt(var / self.count)


MIN_SAMPLES = 1000


def reverse_holder_mc(sampler, a, b, p, q, pair=None, n_samples=100_000, seed=None, batches=8, sigmas=3.0):
    """Monte Carlo check of the reverse Hölder bound for i.i.d. draws from ``sampler``.

    Batches use child seeds spawned from the master seed, and only summed
    statistics are merged, so the result does not depend on batch order.
    The verdict is ``pass`` when the bound holds with ``sigmas`` standard
    errors to spare, ``fail`` only when it is violated by more than that,
    and ``inconclusive`` otherwise or when the sample budget is too small.
    """
    pair = pair or NormPair(2, 2, sampler.dim)
    trace = reverse_holder_constant(a, b, p, q, pair)
    seed = sampler.seed if seed is None else seed
    a_f, b_f = float(a), float(b)
    diff_stats, combo_stats = _Stats(), _Stats()
    children = np.random.SeedSequence(seed).spawn(batches)
    sizes = [n_samples // batches + (1 if i < n_samples % batches else 0) for i in range(batches)]
    for child, size in zip(children, sizes):
        if not size:
            continue
        rng = np.random.default_rng(child)
        x = sampler.draw(rng, size)
        y = sampler.draw(rng, size)
        diff = np.linalg.norm(x - y, ord=pair.second, axis=1)
        combo = np.linalg.norm(a_f * x + b_f * y, ord=pair.first, axis=1)
        diff_stats.add(diff ** float(q))
        combo_stats.add(combo ** float(p))
    inputs = {"sampler": sampler, "a": str(a), "b": str(b), "p": float(p), "q": float(q), "pair": pair, "n": n_samples, "seed": seed}
    notes = [f"constant {trace.constant} from r1 = {trace.r1}, r2 = {trace.r2}, N <= {trace.n_bound}"]
    if n_samples < MIN_SAMPLES:
        return VerificationReport("reverse-holder", None, None, trace.constant, INCONCLUSIVE, 0.0, digest(inputs),
                                  tuple(notes + [f"sample budget {n_samples} below {MIN_SAMPLES}"]), trace)
    m1, s1 = diff_stats.mean, diff_stats.stderr
    m2, s2 = combo_stats.mean, combo_stats.stderr
    q_f, p_f = float(q), float(p)
    lhs = m1 ** (1 / q_f)
    rhs = trace.constant * m2 ** (1 / p_f)
    se_l = abs(1 / q_f) * m1 ** (1 / q_f - 1) * s1
    se_r = trace.constant * abs(1 / p_f) * m2 ** (1 / p_f - 1) * s2
    sigma = math.hypot(se_l, se_r)
    if not math.isfinite(sigma):
        status = INCONCLUSIVE
    elif lhs + sigmas * sigma <= rhs:
        status = PASS
    elif lhs - sigmas * sigma > rhs:
        status = FAIL
    else:
        status = INCONCLUSIVE
    notes.append(f"standard error {sigma}")
    parts = [VerificationReport("reverse-holder", lhs, rhs, trace.constant, status, sigmas * sigma, digest(inputs), tuple(notes), trace)]
    exact = sampler.diff_moment(q_f)
    if exact is not None:
        ok = abs(m1 - exact) <= sigmas * s1
        parts.append(VerificationReport(
            "reverse-holder-oracle", m1, exact, None, PASS if ok else INCONCLUSIVE, sigmas * s1, digest(inputs),
            (f"closed-form E|X-Y|^{q_f:g} = {exact}",),
        ))
    return composite("reverse-holder", parts, digest=digest(inputs), notes=notes) if len(parts) > 1 else parts[0]
