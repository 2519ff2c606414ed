"""Exact maximum independent set by branch and bound on bitsets.

Graphs are given as conflict adjacency: ``conflict[v]`` is an ``int`` whose
bit ``u`` is set when ``u`` and ``v`` may not both be chosen.  The search
looks for a maximum clique in the complement graph with a greedy colouring
bound; a colour class of the complement is a clique of the conflict graph,
so the colouring is also a clique-cover upper bound on the answer.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .errors import SearchBudgetError

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class MISResult:
    size: int
    witness: tuple
    nodes: int
    lower: int
    upper: int


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Relabelled:
    """Complement graph with vertices renumbered so bit ``i`` is ``order[i]``."""

    def __init__(self, conflict, order):
        n = len(order)
        pos = {v: i for i, v in enumerate(order)}
        full = (1 << n) - 1
        comp = []
        identity = all(i == v for i, v in enumerate(order))
        for i, v in enumerate(order):
            if identity:
                mask = conflict[v]
            else:
                mask = 0
                for u in _bits(conflict[v]):
                    mask |= 1 << pos[u]
            comp.append(full & ~mask & ~(1 << i))
        self.n = n
        self.order = list(order)
        self.pos = pos
        self.comp = comp
        self.full = full

    def relabel_mask(self, vertices):
        mask = 0
        for v in vertices:
            mask |= 1 << self.pos[v]
        return mask


def _colour(comp, P):
    """Greedy sequential colouring of the candidate set ``P`` in bit order."""
    order, cols = [], []
    c = 0
    U = P
    while U:
        c += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~comp[v]
            Q ^= low
            U ^= low
            order.append(v)
            cols.append(c)
    return order, cols


def greedy_independent_set(conflict, order):
    """First-fit independent set along ``order``."""
    chosen = []
    blocked = 0
    for v in order:
        if not (blocked >> v) & 1:
            chosen.append(v)
            blocked |= conflict[v] | (1 << v)
    return chosen


def min_degree_independent_set(conflict, n):
    """Repeatedly take the remaining vertex with the fewest remaining conflicts."""
    P = (1 << n) - 1
    chosen = []
    while P:
        v = min(_bits(P), key=lambda u: ((conflict[u] & P).bit_count(), u))
        chosen.append(v)
        P &= ~(conflict[v] | (1 << v))
    return chosen


def clique_cover_size(conflict, order):
    """Size of a greedy partition of the vertices into conflict cliques."""
    g = _Relabelled(conflict, order)
    _, cols = _colour(g.comp, g.full)
    return cols[-1] if cols else 0


def validate_cover(conflict, n, cover):
    """Check each cell is a conflict clique and the cells cover every vertex."""
    seen = 0
    for cell in cover:
        members = list(cell)
        cell_mask = 0
        for v in members:
            cell_mask |= 1 << v
        for v in members:
            others = cell_mask & ~(1 << v)
            if others & ~conflict[v]:
                raise ValueError("cover cell is not a clique of the conflict graph")
        seen |= cell_mask
    if seen != (1 << n) - 1:
        raise ValueError("cover cells do not cover every vertex")


def bounds(conflict, n, order=None):
    """(greedy lower bound, clique-cover upper bound) without search."""
    if n == 0:
        return 0, 0
    order = list(range(n)) if order is None else list(order)
    lower = len(greedy_independent_set(conflict, order))
    if n <= 2000:
        lower = max(lower, len(min_degree_independent_set(conflict, n)))
    return lower, clique_cover_size(conflict, order)


def max_independent_set(conflict, n, *, order=None, cover=None, budget=DEFAULT_BUDGET, lower_hint=0):
    """Exact maximum independent set size with a witness.

    ``order`` fixes the vertex order used by colouring and branching;
    ``cover`` optionally supplies cells (iterables of vertices) that are
    cliques of the conflict graph and together cover all vertices, giving an
    additional static upper bound.  ``lower_hint`` is a size already known to
    be achievable and only prunes; the witness is always found by the search.
    """
    if n == 0:
        return MISResult(0, (), 0, 0, 0)
    order = list(range(n)) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the vertices")
    g = _Relabelled(conflict, order)
    comp = g.comp

    greedy = greedy_independent_set(conflict, order)
    if n <= 2000:
        alt = min_degree_independent_set(conflict, n)
        if len(alt) > len(greedy):
            greedy = alt
    _, cols = _colour(comp, g.full)
    upper = cols[-1]

    cells = []
    if cover is not None:
        cover = [list(c) for c in cover]
        validate_cover(conflict, n, cover)
        cells = [g.relabel_mask(c) for c in cover]
        upper = min(upper, len(cells))

    best_size = len(greedy)
    best_witness = [g.pos[v] for v in greedy]
    floor = max(best_size, lower_hint - 1)
    state = {"best": floor, "nodes": 0}
    stack = []

    def static_bound(P):
        return sum(1 for c in cells if c & P)

    def expand(P):
        nonlocal best_size, best_witness
        size = len(stack)
        if cells and size + static_bound(P) <= state["best"]:
            return
        vs, cs = _colour(comp, P)
        for i in range(len(vs) - 1, -1, -1):
            if size + cs[i] <= state["best"]:
                return
            if cells and size + static_bound(P) <= state["best"]:
                return
            state["nodes"] += 1
            if state["nodes"] > budget:
                raise SearchBudgetError(best_size, upper, budget)
            v = vs[i]
            stack.append(v)
            NP = P & comp[v]
            if NP:
                expand(NP)
            elif size + 1 > best_size:
                best_size = size + 1
                best_witness = list(stack)
                state["best"] = max(state["best"], best_size)
            stack.pop()
            P &= ~(1 << v)

    limit = sys.getrecursionlimit()
    if limit < n + 100:
        sys.setrecursionlimit(n + 100)
    try:
        expand(g.full)
    finally:
        sys.setrecursionlimit(limit)

    if best_size <= floor and floor > len(greedy):
        # the hint was too optimistic, so sizes below it were never explored
        return max_independent_set(conflict, n, order=order, cover=cover, budget=budget)
    witness = tuple(sorted(g.order[i] for i in best_witness))
    return MISResult(best_size, witness, state["nodes"], len(greedy), upper)
