from fractions import Fraction

import pytest

from gapped_persistence.gapped import full_sequence, gapped_spectral_invariant, restrict, \
    validate_gapped
from gapped_persistence.persistence import COLIMIT, Barcode, Interval, barcode
from gapped_persistence.s2 import (S2FixtureSpec, build_s2_fixture, hf_rank, s2_reference,
                                   sh_rank)

EPS = Fraction(1, 100)


def fixture_barcode(k, spec=S2FixtureSpec()):
    gm = build_s2_fixture(spec, k)
    return barcode(restrict(gm, full_sequence(gm)))


def test_rank_table():
    assert [hf_rank(1, m) for m in range(4)] == [1, 1, 1, 1]
    assert [hf_rank(3, m) for m in range(5)] == [0, 1, 2, 2, 2]
    assert [hf_rank(2, m) for m in range(4)] == [1, 2, 2, 2]
    assert [sh_rank(k) for k in range(1, 11)] == [1] + [2] * 9


def test_degree_1_small_window():
    spec = S2FixtureSpec(1, 3, EPS)
    gm = build_s2_fixture(spec, 1)
    assert gm.dims == (1, 1, 1, 1)
    assert gm.maps[(0, 1)].is_zero()
    assert gm.colimit_dim == 1
    assert fixture_barcode(1, spec) == Barcode((Interval(EPS, EPS), Interval(1 + EPS, COLIMIT)))


def test_degree_3_window_4():
    spec = S2FixtureSpec(3, 4, EPS)
    gm = build_s2_fixture(spec, 3)
    assert gm.dims == (0, 1, 2, 2, 2)
    assert fixture_barcode(3, spec) == Barcode((Interval(1 + EPS, COLIMIT),
                                                Interval(2 + EPS, COLIMIT)))


def test_degree_2():
    spec = S2FixtureSpec(2, 3, EPS)
    assert build_s2_fixture(spec, 2).dims == (1, 2, 2, 2)
    assert fixture_barcode(2, spec) == Barcode((Interval(EPS, COLIMIT), Interval(1 + EPS, COLIMIT)))
    assert gapped_spectral_invariant(build_s2_fixture(spec, 2), (0, 1)) == 1 + EPS


@pytest.mark.parametrize("k", range(1, 11))
def test_matches_reference(k):
    gm = build_s2_fixture(S2FixtureSpec(), k)
    assert validate_gapped(gm) is None
    ref = s2_reference(k)
    assert fixture_barcode(k) == ref.barcode
    a = (1,) if gm.colimit_dim == 1 else (1, 0)
    assert gapped_spectral_invariant(gm, a) == ref.c_a
    if ref.c_b is not None:
        assert gapped_spectral_invariant(gm, (0, 1)) == ref.c_b


def test_reference_values():
    assert s2_reference(5)[1:] == (2 + EPS, 3 + EPS)
    assert s2_reference(1).c_a == 1 + EPS
    births = s2_reference(4).barcode.colimit_births()
    assert births == [1 + EPS, 2 + EPS]
    with pytest.raises(ValueError):
        s2_reference(0)


def test_argument_errors():
    with pytest.raises(ValueError):
        build_s2_fixture(S2FixtureSpec(), 0)
    with pytest.raises(ValueError):
        build_s2_fixture(S2FixtureSpec(), 11)
    with pytest.raises(ValueError):
        S2FixtureSpec(epsilon=1)
    with pytest.raises(ValueError):
        S2FixtureSpec(10, 5)
