import random
import statistics
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import brute_pairs

from smallball.errors import RejectedInputError, UnsupportedCarrierError
from smallball.groups import Lattice, RationalSpace, RationalVector, make_cyclic, make_dihedral, make_symmetric
from smallball.multisets import (
    Multiset,
    enumerate_multisets,
    lemma_sweep,
    lln_convergence,
    sample_admissible_pairs,
    t_minus,
    t_plus,
    t_plus_linear,
    t_tuple,
    verify_katona_comb,
    verify_lemma_diff,
    verify_lemma_linear,
    verify_lemma_nonabelian,
    verify_lemma_sum,
    verify_turan_bound,
)
from smallball.packing import entropy_number
from smallball.prob import FiniteDist
from smallball.sets import GroupSet, full_set

Z5, Z7 = make_cyclic(5), make_cyclic(7)
LINE = Lattice(1, -10, 10)


def test_t_plus_examples():
    g = make_cyclic(3)
    assert t_plus(Multiset(g, [0]), GroupSet(g, [1]), 2) == 2
    assert t_plus(Multiset(Z5, [1, 2]), GroupSet(Z5, [3]), 2) == 6
    assert t_plus(Multiset(LINE, [1, 1, 1]), GroupSet(LINE, [2]), 0) == 6


def test_t_minus_examples():
    assert t_minus(Multiset(Z5, [0]), GroupSet(Z5, [0]), 4) == 4
    assert t_minus(Multiset(Z5, [1, 2]), GroupSet(Z5, [0, 1, 4]), 2) == 6
    assert t_minus(Multiset(LINE, [1, 1]), GroupSet(LINE, [0]), 0) == 2


def test_t_tuple_examples():
    t = Multiset(Z5, [0, 1, 1, 3])
    everything = [(x, y) for x in range(5) for y in range(5)]
    assert t_tuple(t, everything, 2) == 4 * 3
    assert t_tuple(t, [], 2) == 0
    assert t_tuple(Multiset(make_cyclic(2), [0, 1]), [(0, 1)], 2) == 1


def test_lemma_sum_examples():
    g = make_cyclic(3)
    v = verify_lemma_sum(Multiset(g, [0]), full_set(g), GroupSet(g, [0]))
    assert v.passed and v.lhs == 2 and v.rhs == 4 * v.constant
    v = verify_lemma_sum(Multiset(Z7, [0, 1, 2, 3]), GroupSet(Z7, [3]), GroupSet(Z7, [0, 1, 6]))
    assert v.passed


def test_lemma_sum_rejections():
    t, k = Multiset(Z7, [0]), GroupSet(Z7, [0, 1, 6])
    with pytest.raises(RejectedInputError):
        verify_lemma_sum(t, GroupSet(Z7, []), k)
    with pytest.raises(RejectedInputError):
        verify_lemma_sum(t, GroupSet(Z7, [1]), GroupSet(Z7, [0, 1]))
    with pytest.raises(RejectedInputError):
        verify_lemma_sum(t, GroupSet(Z7, [1]), k, s=Fraction(3, 2))
    d3 = make_dihedral(3)
    with pytest.raises(RejectedInputError):
        verify_lemma_sum(Multiset(d3, [0]), GroupSet(d3, [1]), GroupSet(d3, [0]))


def test_relaxed_s_admits_the_lower_threshold():
    # relaxed mode needs s >= 2N/(2N-1): 6/5 when N = 3, 2 when N = 1
    k = GroupSet(Z7, [0, 1, 6])
    spread, single = GroupSet(Z7, [0, 2, 4]), GroupSet(Z7, [3])
    t = Multiset(Z7, [0, 3, 3])
    assert entropy_number(spread, k) == 3
    v = verify_lemma_sum(t, spread, k, s=Fraction(6, 5), relaxed=True)
    assert v.passed and v.s == Fraction(6, 5)
    with pytest.raises(RejectedInputError):
        verify_lemma_sum(t, spread, k, s=Fraction(6, 5))
    with pytest.raises(RejectedInputError):
        verify_lemma_sum(t, single, k, s=Fraction(19, 10), relaxed=True)


def test_lemma_diff_examples():
    k = GroupSet(Z7, [0, 1, 6])
    v = verify_lemma_diff(Multiset(Z7, [0, 1, 1]), GroupSet(Z7, [0, 1]), k)
    assert v.constant == 1 and v.passed
    window = Lattice(1, -10, 10)
    v = verify_lemma_diff(Multiset(window, [0, 3, 6]), GroupSet(window, range(-6, 7)), GroupSet(window, [-1, 0, 1]))
    assert v.passed


def test_nonabelian_examples():
    d3 = make_dihedral(3)
    rotations = GroupSet(d3, range(3))
    coset = GroupSet(d3, [3, 4, 5])
    verdicts = lemma_sweep("4.1", d3, [(coset, rotations)], 4)
    assert len(verdicts) > 0 and all(v.passed for v in verdicts)
    trivial = GroupSet(d3, [0])
    v = verify_lemma_nonabelian(Multiset(d3, [1, 3, 3]), full_set(d3), trivial)
    assert v.constant == 6 and v.passed
    with pytest.raises(RejectedInputError):
        verify_lemma_nonabelian(Multiset(d3, [0]), coset, GroupSet(d3, [0, 3]))
    s3 = make_symmetric(3)
    a3 = GroupSet(s3, s3.distinguished["alternating"])
    pairs = [(GroupSet(s3, [x]), a3) for x in range(6)]
    assert all(v.passed for v in lemma_sweep("4.diff", s3, pairs, 4))


def test_linear_examples():
    q = RationalSpace(1)
    grid = list(range(-4, 5))
    f, k = GroupSet(q, grid), GroupSet(q, [-1, 0, 1])
    t = Multiset(q, [0, 1, 3])
    same = verify_lemma_linear(t, f, k, a=1, b=1)
    plain = verify_lemma_sum(t, f, k)
    assert (same.lhs, same.rhs, same.status) == (plain.lhs, plain.rhs, plain.status)
    assert verify_lemma_linear(t, f, k, a=-1, b=1).constant == entropy_number(f, k)
    verdicts = lemma_sweep("5.1", q, [(f, k)], 4, a=1, b=2, elements=grid)
    assert len(verdicts) == 9 + 45 + 165 + 495 and all(v.passed for v in verdicts)
    with pytest.raises(RejectedInputError):
        verify_lemma_linear(t, f, k, a=0, b=1)


def test_turan_examples():
    plane = RationalSpace(2)
    v = RationalVector([Fraction(3, 5), Fraction(4, 5)])
    out = verify_turan_bound(Multiset(plane, [v, -v]))
    assert out.passed and (out.lhs, out.rhs) == (2, 4)
    short = verify_turan_bound(Multiset(plane, [(0, 0), (Fraction(1, 2), 0)]))
    assert short.passed and short.lhs == 0
    with pytest.raises(UnsupportedCarrierError):
        verify_turan_bound(Multiset(Z5, [1]))


def test_katona_comb_examples():
    window = Lattice(1, -10, 10)
    v = verify_katona_comb(Multiset(window, [0, 2, 4]), GroupSet(window, range(5)), GroupSet(window, [-1, 0, 1]))
    assert v.passed
    k = GroupSet(Z7, [0, 1, 6])
    f = full_set(Z7)
    assert verify_katona_comb(Multiset(Z7, [0, 3]), f, k).passed


def test_sweep_counts():
    assert sum(1 for _ in enumerate_multisets(range(7), 5)) == 791
    pairs = sample_admissible_pairs(Z7, 20, seed=1)
    assert len(pairs) == 20 and len({(f.members, k.members) for f, k in pairs}) == 20
    assert pairs == sample_admissible_pairs(Z7, 20, seed=1)
    verdicts = lemma_sweep("3.1", Z7, pairs, 3)
    assert len(verdicts) == 119 * 20 and all(v.passed for v in verdicts)


def test_lln_point_mass():
    x = FiniteDist.point_mass(Z5, 2)
    trace = lln_convergence(x, [(2, 2)], 2, [5, 50], seed=0)
    assert trace.p == 1 and all(dev == 0 for _, _, dev in trace.points)


def test_lln_uniform_z2():
    x = FiniteDist.uniform(make_cyclic(2), [0, 1])
    devs = []
    for seed in range(20):
        trace = lln_convergence(x, [(0, 1)], 2, [10, 100, 2000], seed)
        assert trace.p == Fraction(1, 4)
        devs.append([float(d) for _, _, d in trace.points])
    assert sum(d[-1] < 0.02 for d in devs) >= 18
    means = [statistics.mean(col) for col in zip(*devs)]
    assert means == sorted(means, reverse=True)


counts = st.lists(st.integers(0, 6), min_size=1, max_size=7)
subsets = st.sets(st.integers(0, 6), max_size=7)


@given(counts, subsets, st.integers(0, 4))
def test_pair_statistics_match_index_loops(items, f_members, s):
    t = Multiset(Z7, items)
    f = GroupSet(Z7, f_members)
    assert t_plus(t, f, s) == len(items) * s + brute_pairs(items, lambda u, v: (u + v) % 7 in f_members)
    assert t_minus(t, f, s) == len(items) * s + brute_pairs(items, lambda u, v: (u - v) % 7 in f_members)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=6), st.sets(st.integers(-9, 9), max_size=8),
       st.sampled_from([-2, -1, 1, 2, 3]), st.sampled_from([-3, -1, 1, 2]))
def test_linear_statistic_matches_index_loops(items, f_members, a, b):
    q = RationalSpace(1)
    t = Multiset(q, items)
    got = t_plus_linear(t, GroupSet(q, f_members), 2, a, b)
    assert got == 2 * len(items) + brute_pairs(items, lambda u, v: a * u + b * v in f_members)


@given(st.lists(st.integers(0, 2), min_size=0, max_size=6), st.integers(1, 3))
def test_tuple_count_matches_enumeration(items, k):
    import itertools

    g = make_cyclic(3)
    rng = random.Random(len(items) * 7 + k)
    f = [tup for tup in itertools.product(range(3), repeat=k) if rng.random() < 0.5]
    t = Multiset(g, items)
    brute = sum(1 for idx in itertools.permutations(range(len(items)), k) if tuple(items[i] for i in idx) in f)
    assert t_tuple(t, f, k) == brute


@given(counts, st.integers(0, 10**6))
def test_lemmas_hold_on_random_pairs(items, seed):
    t = Multiset(Z7, items)
    for f, k in sample_admissible_pairs(Z7, 3, seed):
        assert verify_lemma_sum(t, f, k).passed
        assert verify_lemma_diff(t, f, k).passed
        assert verify_katona_comb(t, f, k).passed


@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(1, 4)), min_size=1, max_size=8))
def test_turan_holds_on_random_planar_multisets(raw):
    plane = RationalSpace(2)
    items = [(Fraction(x, d), Fraction(y, d)) for x, y, d in raw]
    assert verify_turan_bound(Multiset(plane, items)).passed
