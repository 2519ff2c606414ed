"""Packing numbers N(F, K).

``N(F, K)`` is the largest size of ``S ⊆ F`` whose pairwise quotients
``x*y^-1`` (differences ``x - y`` on abelian carriers) avoid ``K`` apart
from the identity.  It is the independence number of the conflict graph
on ``F`` joining ``u != v`` whenever ``u*v^-1`` or ``v*u^-1`` lies in ``K``.

On a windowed lattice the value is the packing number of the windowed
sets; the same sets inside the infinite lattice give the same answer, but
the continuum quantity they discretise may be larger.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import RejectedInputError, UnsupportedCarrierError
from .groups import RationalSpace, check_same_carrier
from .mis import DEFAULT_BUDGET, bounds, max_independent_set
from .sets import GroupSet, dilate

WINDOW_CAVEAT = "windowed carrier: the value counts points inside the declared sets only"


class ConflictGraph:
    """Conflict graph of ``F`` with respect to ``K``; vertices follow ``F.members``."""

    def __init__(self, f, k):
        check_same_carrier(f.carrier, k.carrier)
        carrier = f.carrier
        op, inv = carrier.op, carrier.inv
        forbidden = k.as_frozenset
        members = f.members
        n = len(members)
        inverses = [inv(x) for x in members]
        adj = [0] * n
        for i in range(n):
            u = members[i]
            ui = inverses[i]
            for j in range(i + 1, n):
                v = members[j]
                if op(u, inverses[j]) in forbidden or op(v, ui) in forbidden:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        self.vertices = members
        self.adjacency = adj

    def __len__(self):
        return len(self.vertices)

    def degree(self, i):
        return self.adjacency[i].bit_count()

    def edges(self):
        for i, mask in enumerate(self.adjacency):
            for j in range(i + 1, len(self.vertices)):
                if (mask >> j) & 1:
                    yield i, j

    def search_order(self):
        """Descending conflict degree, ties broken by element index."""
        return sorted(range(len(self.vertices)), key=lambda i: (-self.degree(i), i))

    def is_independent(self, indices):
        indices = list(indices)
        mask = 0
        for i in indices:
            mask |= 1 << i
        return all(not (self.adjacency[i] & mask) for i in indices)


@lru_cache(maxsize=8192)
def _search(f, k, budget):
    graph = ConflictGraph(f, k)
    result = max_independent_set(graph.adjacency, len(graph), order=graph.search_order(), budget=budget)
    return result, graph


def packing_search(f, k, budget=DEFAULT_BUDGET):
    """Full search result: size, witness subset of ``F``, node count and bounds."""
    result, graph = _search(f, k, budget)
    witness = GroupSet(f.carrier, [graph.vertices[i] for i in result.witness], trusted=True)
    return result, witness


def entropy_number(f, k, mode="exact", budget=DEFAULT_BUDGET):
    """``N(F, K)``; with ``mode="bounds"`` the (greedy, clique cover) pair instead.

    The quotient convention ``u*v^-1`` covers the abelian and nonabelian
    definitions at once.  In exact mode a search exceeding ``budget`` nodes
    raises :class:`SearchBudgetError` carrying the best bounds.
    """
    check_same_carrier(f.carrier, k.carrier)
    if mode not in ("exact", "bounds"):
        raise ValueError(f"mode must be 'exact' or 'bounds', got {mode!r}")
    if len(f) == 0:
        return 0 if mode == "exact" else (0, 0)
    if mode == "bounds":
        graph = ConflictGraph(f, k)
        return bounds(graph.adjacency, len(graph), graph.search_order())
    result, _ = _search(f, k, budget)
    return result.size


def entropy_number_linear(a, b, f, k, budget=DEFAULT_BUDGET):
    """``(N(F/a, K) + N(F/b, K)) / 2`` for nonzero rationals ``a`` and ``b``."""
    if not isinstance(f.carrier, RationalSpace):
        raise UnsupportedCarrierError("linear combinations need a rational vector space")
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise RejectedInputError(
            "a zero coefficient leaves the linear case; use the squared-probability bound instead"
        )
    check_same_carrier(f.carrier, k.carrier)
    if not k.is_admissible:
        raise RejectedInputError("K must be symmetric and contain the origin")
    na = entropy_number(dilate(f, 1 / a), k, budget=budget)
    nb = entropy_number(dilate(f, 1 / b), k, budget=budget)
    return Fraction(na + nb, 2)


def _fraction_gcd(x, y):
    den = x.denominator * y.denominator
    return Fraction(math.gcd(x.numerator * y.denominator, y.numerator * x.denominator), den)


def interval_grid_constant(a, b, c, d, pitch, budget=DEFAULT_BUDGET):
    """Linear packing constant for ``F = [-c, c]`` and ``K = [-d, d]`` on a grid.

    ``F`` is sampled at ``pitch``; ``K`` at the finest pitch on which both
    dilations ``F/a`` and ``F/b`` live, so every difference they produce is
    tested against ``K``.  As ``pitch`` shrinks the value approaches
    ``(ceil(2c/(|a|d)) + ceil(2c/(|b|d))) / 2``.
    """
    a, b, c, d, pitch = (Fraction(v) for v in (a, b, c, d, pitch))
    if pitch <= 0 or c < 0 or d < 0:
        raise ValueError("need pitch > 0 and nonnegative half-widths")
    line = RationalSpace(1)
    fine = _fraction_gcd(pitch / abs(a), pitch / abs(b))
    f = GroupSet(line, [i * pitch for i in range(-math.floor(c / pitch), math.floor(c / pitch) + 1)])
    k = GroupSet(line, [i * fine for i in range(-math.floor(d / fine), math.floor(d / fine) + 1)])
    return entropy_number_linear(a, b, f, k, budget)
