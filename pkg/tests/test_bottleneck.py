from fractions import Fraction

from hypothesis import given, settings, strategies as st

from gapped_persistence.bottleneck import bottleneck_distance, candidate_costs
from gapped_persistence.exact import INF
from gapped_persistence.persistence import COLIMIT, Barcode, Interval

from oracles import COLIM, bottleneck_oracle


def bc(*bars):
    return Barcode(tuple(Interval(b, COLIMIT if d == COLIM else d) for b, d in bars))


def test_identical_barcodes():
    b = bc((0, 2), (1, COLIM), (Fraction(1, 3), Fraction(1, 3)))
    assert bottleneck_distance(b, b) == 0


def test_single_forced_colimit_matching():
    assert bottleneck_distance(bc((0, COLIM)), bc((3, COLIM))) == 3


def test_small_case_against_enumeration():
    left, right = [(0, 2), (0, COLIM)], [(1, COLIM)]
    assert bottleneck_oracle(left, right) == 1
    assert bottleneck_distance(bc(*left), bc(*right)) == 1


def test_mismatched_colimit_counts():
    assert bottleneck_distance(bc((0, COLIM)), bc()) == INF
    assert bottleneck_distance(bc(), bc()) == 0


def test_diagonal_is_half_length():
    assert bottleneck_distance(bc((0, 3)), bc()) == Fraction(3, 2)


def test_candidates_include_answer():
    a, b = bc((0, 2), (0, COLIM)), bc((1, COLIM))
    assert bottleneck_distance(a, b) in candidate_costs(a, b)


bar = st.tuples(st.integers(-6, 6), st.one_of(st.integers(0, 6), st.just(COLIM))).map(
    lambda t: (Fraction(t[0], 2), t[1] if t[1] == COLIM else Fraction(t[0], 2) + Fraction(t[1], 3)))
bars = st.lists(bar, max_size=4)
few_bars = st.lists(bar, max_size=3)


@settings(max_examples=150)
@given(few_bars, few_bars)
def test_matches_enumeration_oracle(x, y):
    assert bottleneck_distance(bc(*x), bc(*y)) == bottleneck_oracle(x, y)


@given(bars, bars, bars)
def test_pseudometric(x, y, z):
    a, b, c = bc(*x), bc(*y), bc(*z)
    assert bottleneck_distance(a, b) == bottleneck_distance(b, a)
    assert bottleneck_distance(a, c) <= bottleneck_distance(a, b) + bottleneck_distance(b, c)
