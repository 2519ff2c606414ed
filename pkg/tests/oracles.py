"""Brute-force oracles shared by the test modules.

Each oracle recomputes a quantity from its definition with no shared code
path: subsets are enumerated directly, convolutions are nested loops over
atoms, and pair statistics loop over index pairs.
"""

from collections import defaultdict
from fractions import Fraction
from itertools import combinations

def brute_packing(f, k):
    """Largest S within F whose pairwise quotients miss K, by trying all subsets."""
    g = f.carrier
    members = list(f.members)
    forbidden = set(k.members)
    for size in range(len(members), 0, -1):
        for s in combinations(members, size):
            if all(
                g.op(u, g.inv(v)) not in forbidden and g.op(v, g.inv(u)) not in forbidden
                for u, v in combinations(s, 2)
            ):
                return size
    return 0


def brute_pairs(items, test):
    """Ordered pairs of distinct indices satisfying ``test``."""
    n = len(items)
    return sum(1 for i in range(n) for j in range(n) if i != j and test(items[i], items[j]))


def brute_convolve(x, y, combine):
    out = defaultdict(Fraction)
    for u, wu in x.items():
        for v, wv in y.items():
            out[combine(u, v)] += wu * wv
    return dict(out)


def brute_mass(mapping, members):
    members = set(members)
    return sum((w for z, w in mapping.items() if z in members), Fraction(0))


def brute_concentration(mapping, g, f):
    """Max over translates ``x*F`` with x any element that can hit the support."""
    pts = set(mapping)
    best = Fraction(0)
    for z in pts:
        for a in f.members:
            shift = g.op(z, g.inv(a))
            translate = {g.op(shift, b) for b in f.members}
            best = max(best, brute_mass(mapping, translate))
    return best
