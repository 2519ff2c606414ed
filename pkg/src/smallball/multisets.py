"""Deterministic multiset statistics and the combinatorial lemmas behind the
small-ball inequalities.

For a multiset ``T = (x_1, ..., x_m)``:

* ``T+(F, s) = m*s + #{(i, j): i != j, x_i x_j in F}``
* ``T-(K, s) = m*s + #{(i, j): i != j, x_i x_j^-1 in K}``

and each lemma bounds a statistic of ``F`` by a packing number times a
statistic of ``K``.  Verifiers refuse inputs outside a lemma's hypotheses
instead of evaluating them.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .canon import to_plain
from .errors import RejectedInputError, UnsupportedCarrierError
from .groups import FiniteGroup, RationalSpace, check_same_carrier, finite_elements, is_normal_subgroup
from .packing import entropy_number, entropy_number_linear
from .reports import FAIL, PASS
from .sets import GroupSet, set_minus

DEFAULT_S = Fraction(2)


@dataclass(frozen=True)
class Multiset:
    carrier: object
    items: tuple

    def __init__(self, carrier, items):
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "items", tuple(carrier.coerce(x) for x in items))

    @property
    def m(self):
        return len(self.items)

    def counts(self):
        return Counter(self.items)

    def to_json(self):
        from .sets import encode_element

        return {"carrier": self.carrier.to_json(), "items": [encode_element(x) for x in self.items]}


@dataclass(frozen=True)
class LemmaVerdict:
    lemma: str
    lhs: object
    rhs: object
    constant: object
    s: object
    status: str
    witness: object = None

    @property
    def passed(self):
        return self.status == PASS

    def to_json(self):
        out = {
            "kind": "lemma",
            "lemma": self.lemma,
            "lhs": to_plain(self.lhs),
            "rhs": to_plain(self.rhs),
            "constant": to_plain(self.constant),
            "s": to_plain(self.s),
            "status": self.status,
        }
        if self.witness is not None:
            out["witness"] = to_plain(self.witness)
        return out


def _integral(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else q


def _pair_count(counts, op, target):
    """Ordered pairs ``i != j`` with ``op(x_i, x_j)`` in ``target``, from value counts."""
    total = 0
    items = list(counts.items())
    for u, cu in items:
        for v, cv in items:
            if op(u, v) in target:
                total += cu * (cv - 1) if u == v else cu * cv
    return total


def t_plus(t, f, s=DEFAULT_S):
    check_same_carrier(t.carrier, f.carrier)
    op = t.carrier.op
    return _integral(t.m * Fraction(s) + _pair_count(t.counts(), op, f.as_frozenset))


def t_minus(t, k, s=DEFAULT_S):
    check_same_carrier(t.carrier, k.carrier)
    op, inv = t.carrier.op, t.carrier.inv
    return _integral(t.m * Fraction(s) + _pair_count(t.counts(), lambda u, v: op(u, inv(v)), k.as_frozenset))


def t_plus_linear(t, f, s, a, b):
    check_same_carrier(t.carrier, f.carrier)
    a, b = Fraction(a), Fraction(b)
    return _integral(t.m * Fraction(s) + _pair_count(t.counts(), lambda u, v: a * u + b * v, f.as_frozenset))


def _falling(n, k):
    out = 1
    for i in range(k):
        out *= n - i
    return out


def t_tuple(t, f, k):
    """Ordered ``k``-tuples of distinct indices whose values lie in ``f``."""
    if k > t.m:
        return 0
    counts = t.counts()
    total = 0
    for tup in set(tuple(x) for x in f):
        if len(tup) != k:
            continue
        ways = 1
        for value, mult in Counter(tup).items():
            ways *= _falling(counts.get(value, 0), mult)
            if not ways:
                break
        total += ways
    return total


def _require_admissible(k):
    if not k.is_symmetric:
        raise RejectedInputError("K must be symmetric")
    if not k.contains_identity:
        raise RejectedInputError("K must contain the identity")


def _require_s(s, n, relaxed):
    s = Fraction(s)
    bound = Fraction(2 * n, 2 * n - 1) if relaxed and n >= 1 else Fraction(2)
    if s < bound:
        raise RejectedInputError(f"s = {s} is below the admissible bound {bound}")
    return s


def _require_abelian(carrier):
    if not carrier.is_abelian:
        raise RejectedInputError("this lemma is stated for abelian carriers; use the normal-subgroup variant")


def _verdict(lemma, lhs, rhs, constant, s, t, f, k):
    status = PASS if lhs <= rhs else FAIL
    witness = None
    if status == FAIL:
        witness = {"multiset": t, "f": f, "k": k}
    return LemmaVerdict(lemma, lhs, rhs, constant, _integral(s), status, witness)


def verify_lemma_sum(t, f, k, s=DEFAULT_S, relaxed=False):
    """``T+(F, s) <= N(F, K) * T-(K, 2s)`` for symmetric ``K`` containing 0."""
    check_same_carrier(t.carrier, f.carrier, k.carrier)
    _require_abelian(t.carrier)
    _require_admissible(k)
    if len(f) == 0:
        raise RejectedInputError("F must be nonempty: the m*s term cannot be covered by N = 0")
    n = entropy_number(f, k)
    s = _require_s(s, n, relaxed)
    lhs = t_plus(t, f, s)
    rhs = n * t_minus(t, k, 2 * s)
    return _verdict("3.1", lhs, rhs, n, s, t, f, k)


def verify_lemma_diff(t, f, k, s=DEFAULT_S):
    """``T-(F, s) <= (1 + N(F minus K, K)) * T-(K, 2s)``."""
    check_same_carrier(t.carrier, f.carrier, k.carrier)
    _require_abelian(t.carrier)
    _require_admissible(k)
    s = _require_s(s, 0, False)
    constant = 1 + entropy_number(set_minus(f, k), k)
    lhs = t_minus(t, f, s)
    rhs = constant * t_minus(t, k, 2 * s)
    return _verdict("3.3", lhs, rhs, constant, s, t, f, k)


def verify_lemma_nonabelian(t, f, k, s=DEFAULT_S, variant="sum"):
    """Product and quotient lemmas for a normal subgroup ``K``."""
    check_same_carrier(t.carrier, f.carrier, k.carrier)
    if not isinstance(t.carrier, FiniteGroup):
        raise UnsupportedCarrierError("the normal-subgroup lemmas need a finite group carrier")
    if not is_normal_subgroup(t.carrier, k):
        raise RejectedInputError("K must be a normal subgroup")
    if variant == "sum":
        if len(f) == 0:
            raise RejectedInputError("F must be nonempty")
        constant = entropy_number(f, k)
        s = _require_s(s, constant, False)
        lhs = t_plus(t, f, s)
        return _verdict("4.1", lhs, constant * t_minus(t, k, 2 * s), constant, s, t, f, k)
    if variant == "diff":
        s = _require_s(s, 0, False)
        constant = 1 + entropy_number(set_minus(f, k), k)
        lhs = t_minus(t, f, s)
        return _verdict("4.diff", lhs, constant * t_minus(t, k, 2 * s), constant, s, t, f, k)
    raise ValueError(f"variant must be 'sum' or 'diff', got {variant!r}")


def verify_lemma_linear(t, f, k, s=DEFAULT_S, a=1, b=1):
    """``T+(F, s, a, b) <= N(a, b, F, K) * T-(K, 2s)`` over a rational vector space."""
    check_same_carrier(t.carrier, f.carrier, k.carrier)
    if not isinstance(t.carrier, RationalSpace):
        raise UnsupportedCarrierError("linear combinations need a rational vector space")
    if Fraction(a) == 0 or Fraction(b) == 0:
        raise RejectedInputError("coefficients must be nonzero")
    _require_admissible(k)
    if len(f) == 0:
        raise RejectedInputError("F must be nonempty")
    constant = entropy_number_linear(a, b, f, k)
    s = _require_s(s, 0, False)
    lhs = t_plus_linear(t, f, s, a, b)
    return _verdict("5.1", lhs, _integral(constant * t_minus(t, k, 2 * s)), constant, s, t, f, k)


def verify_turan_bound(t):
    """Katona's counting step: ``n^2 - n <= 2(m + T_m(K))`` for Euclidean points.

    ``n`` counts items of norm at least 1 and ``T_m(K)`` counts ordered
    pairs ``i != j`` with ``||x_i + x_j|| >= 1``.  The verdict also checks
    that among the long items the pairs with ``||x + y|| < 1`` form a
    triangle-free graph and that the Turán edge bound holds.
    """
    carrier = t.carrier
    if not isinstance(carrier, RationalSpace):
        raise UnsupportedCarrierError("the Turán step needs a Euclidean rational carrier")
    sq = carrier.squared_norm
    items = t.items
    m = len(items)
    long_items = [x for x in items if sq(x) >= 1]
    n = len(long_items)
    pairs_k = sum(1 for i in range(m) for j in range(m) if i != j and sq(items[i] + items[j]) >= 1)
    lhs = n * n - n
    rhs = 2 * (m + pairs_k)

    edges = 0
    short = set()
    for i in range(n):
        for j in range(i + 1, n):
            if sq(long_items[i] + long_items[j]) >= 1:
                edges += 1
            else:
                short.add((i, j))
    triangle = next(
        (
            (i, j, l)
            for i, j in short
            for l in range(j + 1, n)
            if (i, l) in short and (j, l) in short
        ),
        None,
    )
    turan_ok = 4 * edges >= 4 * comb(n, 2) - n * n
    status = PASS if lhs <= rhs and triangle is None and turan_ok else FAIL
    witness = None
    if status == FAIL:
        witness = {"multiset": t, "edges": edges, "triangle": triangle}
    return LemmaVerdict("turan", lhs, rhs, 2, 0, status, witness)


def verify_katona_comb(t, f, k):
    """``T(F) <= N(F, K) * (N(F, K)^2 + 2m + #{i != j: x_i - x_j in K})``."""
    check_same_carrier(t.carrier, f.carrier, k.carrier)
    _require_abelian(t.carrier)
    _require_admissible(k)
    n = entropy_number(f, k)
    inside = sum(1 for x in t.items if x in f)
    lhs = inside * (inside - 1)
    op, inv = t.carrier.op, t.carrier.inv
    diffs = _pair_count(t.counts(), lambda u, v: op(u, inv(v)), k.as_frozenset)
    rhs = n * (n * n + 2 * t.m + diffs)
    return _verdict("katona", lhs, rhs, n, 0, t, f, k)


def enumerate_multisets(elements, m_max, m_min=1):
    """All multisets of sizes ``m_min..m_max``, in sorted encoding order."""
    elements = sorted(elements)
    for m in range(m_min, m_max + 1):
        yield from itertools.combinations_with_replacement(elements, m)


def random_admissible_k(carrier, rng, elements=None):
    """Random symmetric set containing the identity, built from inverse pairs."""
    elements = finite_elements(carrier) if elements is None else list(elements)
    inv = carrier.inv
    classes = sorted({tuple(sorted({x, inv(x)})) for x in elements if x != carrier.identity})
    chosen = {carrier.identity}
    for cls in classes:
        if rng.random() < 0.4:
            chosen.update(cls)
    return GroupSet(carrier, chosen)


def random_nonempty_subset(carrier, rng, elements=None, p=0.4):
    elements = finite_elements(carrier) if elements is None else list(elements)
    chosen = [x for x in elements if rng.random() < p]
    if not chosen:
        chosen = [rng.choice(elements)]
    return GroupSet(carrier, chosen)


def sample_admissible_pairs(carrier, count, seed=0, elements=None):
    """``count`` distinct admissible ``(F, K)`` pairs drawn reproducibly."""
    rng = random.Random(seed)
    pairs, seen = [], set()
    attempts = 0
    while len(pairs) < count and attempts < 100 * count:
        attempts += 1
        f = random_nonempty_subset(carrier, rng, elements)
        k = random_admissible_k(carrier, rng, elements)
        key = (f.members, k.members)
        if key not in seen:
            seen.add(key)
            pairs.append((f, k))
    return pairs


LEMMAS = {
    "3.1": lambda t, f, k, s: verify_lemma_sum(t, f, k, s),
    "3.3": lambda t, f, k, s: verify_lemma_diff(t, f, k, s),
    "4.1": lambda t, f, k, s: verify_lemma_nonabelian(t, f, k, s, "sum"),
    "4.diff": lambda t, f, k, s: verify_lemma_nonabelian(t, f, k, s, "diff"),
    "katona": lambda t, f, k, s: verify_katona_comb(t, f, k),
}


def lemma_sweep(lemma, carrier, pairs, m_max, s=DEFAULT_S, m_min=1, a=1, b=1, elements=None):
    """Verdicts for every multiset up to size ``m_max`` against every pair.

    Multisets are enumerated in sorted order and the pairs in the given
    order, so the verdict list is deterministic.
    """
    if lemma == "5.1":
        check = lambda t, f, k, s: verify_lemma_linear(t, f, k, s, a, b)  # noqa: E731
    else:
        check = LEMMAS[lemma]
    elements = finite_elements(carrier) if elements is None else list(elements)
    verdicts = []
    for items in enumerate_multisets(elements, m_max, m_min):
        t = Multiset(carrier, items)
        for f, k in pairs:
            verdicts.append(check(t, f, k, s))
    return verdicts


@dataclass(frozen=True)
class LLNTrace:
    p: Fraction
    k: int
    points: tuple

    def deviation_at(self, m):
        for mm, _ratio, dev in self.points:
            if mm == m:
                return dev
        raise KeyError(m)

    def to_json(self):
        return {
            "kind": "lln",
            "p": to_plain(self.p),
            "k": self.k,
            "points": [[m, to_plain(r), to_plain(d)] for m, r, d in self.points],
        }


def lln_convergence(x, f, k, m_schedule, seed):
    """Sample one i.i.d. stream from ``x`` and report ``|T_m / (m)_k - p|``
    along the schedule, where the first ``m`` draws form the multiset."""
    from .prob import sample_indices, tuple_probability

    if k < 1:
        raise ValueError("k must be at least 1")
    schedule = sorted(int(m) for m in m_schedule)
    p = tuple_probability(x, f)
    rng = np.random.default_rng(seed)
    draws = sample_indices(x, schedule[-1] if schedule else 0, rng)
    tuples = [tuple(tup) for tup in f]
    points = []
    for m in schedule:
        t = Multiset(x.carrier, [x.support[i] for i in draws[:m]])
        denom = _falling(m, k)
        ratio = Fraction(t_tuple(t, tuples, k), denom) if denom else Fraction(0)
        points.append((m, ratio, abs(ratio - p)))
    return LLNTrace(p, k, tuple(points))
