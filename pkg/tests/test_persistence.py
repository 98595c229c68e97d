import itertools
from fractions import Fraction

import pytest

from gapped_persistence.exact import INF, Field, Matrix, rank
from gapped_persistence.gapped import full_sequence, restrict
from gapped_persistence.persistence import (COLIMIT, Barcode, Interval, PersistenceModule,
                                            ValidationError, barcode, check, composite_map, dual,
                                            identity_interleaving, mirror, rank_invariant,
                                            rank_table, shift_values, spectral_invariant, validate,
                                            verify_interleaving)
from gapped_persistence.random_modules import random_persistence_module
from gapped_persistence.s2 import S2FixtureSpec, build_s2_fixture

from oracles import COLIM, matmul_oracle, rank_from_bars, rank_oracle

GF2 = Field.GF2
EPS = Fraction(1, 100)


def s2_module(k, max_m=8):
    gm = build_s2_fixture(S2FixtureSpec(k, max_m, EPS), k)
    return restrict(gm, full_sequence(gm))


def bars_of(bc):
    return [(b.birth, COLIM if b.is_colimit else b.death, b.multiplicity) for b in bc.bars]


def all_classes(dim):
    return list(itertools.product((0, 1), repeat=dim))


class TestValidate:
    def test_one_point_identity(self):
        pm = PersistenceModule.constant([0], 1)
        assert validate(pm) is None

    def test_colimit_incompatibility_reported_at_index_0(self):
        ident = Matrix.identity(1, GF2)
        pm = PersistenceModule([0, 1], (1, 1), (ident,), 1, (Matrix.zeros(1, 1, GF2), ident))
        v = validate(pm)
        assert v is not None
        assert v.constraint == "colimit_compatibility"
        assert v.where == (0,)
        with pytest.raises(ValidationError):
            check(pm)

    def test_fixture_degree_3_is_valid(self):
        assert validate(s2_module(3)) is None

    def test_bad_shapes_and_grid(self):
        ident = Matrix.identity(1, GF2)
        assert validate(PersistenceModule([1, 0], (1, 1), (ident,), 1, (ident, ident))) \
            .constraint == "grid"
        assert validate(PersistenceModule([0, 1], (1, 2), (ident,), 1, (ident, ident))) \
            .constraint == "step_maps"


class TestCompositeMap:
    def test_identity_and_step(self, rng):
        pm = random_persistence_module(rng, 4, 3)
        for i in range(4):
            assert composite_map(pm, i, i) == Matrix.identity(pm.dims[i], GF2)
        for i in range(3):
            assert composite_map(pm, i, i + 1) == pm.step_maps[i]

    def test_rank_one_projection_chain(self):
        p1 = [[1, 0], [0, 0]]
        p2 = [[1, 1], [0, 0]]
        p3 = [[0, 0], [1, 0]]
        steps = tuple(Matrix.from_rows(m, GF2) for m in (p1, p2, p3))
        pm = PersistenceModule([0, 1, 2, 3], (2, 2, 2, 2), steps, 0,
                               tuple(Matrix.zeros(0, 2, GF2) for _ in range(4)))
        expected = matmul_oracle(p3, matmul_oracle(p2, p1))
        assert composite_map(pm, 0, 3).tolist() == expected
        assert rank_invariant(pm, 0, 3) == rank_oracle(expected) == 1

    def test_reversed_indices_rejected(self):
        with pytest.raises(ValueError):
            composite_map(PersistenceModule.constant([0, 1], 1), 1, 0)

    def test_zero_step_kills_rank(self):
        ident = Matrix.identity(1, GF2)
        pm = PersistenceModule([0, 1, 2], (1, 1, 1), (ident, Matrix.zeros(1, 1, GF2)), 0,
                               tuple(Matrix.zeros(0, 1, GF2) for _ in range(3)))
        assert rank_invariant(pm, 0, 2) == 0
        assert rank_invariant(pm, 1, 1) == 1


class TestBarcode:
    def test_zero_module(self):
        assert barcode(PersistenceModule.zero([0, 1, 2])) == Barcode(())

    def test_fixture_degree_1(self):
        bc = barcode(s2_module(1, max_m=3))
        assert bc == Barcode((Interval(EPS, EPS), Interval(1 + EPS, COLIMIT)))

    def test_rank_function_reproduced_on_random_modules(self, rng):
        for _ in range(80):
            n = int(rng.integers(1, 7))
            pm = random_persistence_module(rng, n, 4)
            bars = bars_of(barcode(pm))
            for i in range(n):
                for j in range(i, n):
                    assert rank_from_bars(bars, pm.grid, i, j) == rank_invariant(pm, i, j)
                assert rank_from_bars(bars, pm.grid, i, n) == rank(pm.colimit_maps[i])

    def test_dims_are_bar_counts(self, rng):
        pm = random_persistence_module(rng, 6, 4)
        bc = barcode(pm)
        for i, x in enumerate(pm.grid):
            alive = sum(b.multiplicity for b in bc.bars
                        if b.birth <= x and (b.is_colimit or x <= b.death))
            assert alive == pm.dims[i]

    def test_invalid_module_rejected(self):
        ident = Matrix.identity(1, GF2)
        pm = PersistenceModule([0, 1], (1, 1), (ident,), 1, (Matrix.zeros(1, 1, GF2), ident))
        with pytest.raises(ValidationError):
            barcode(pm)

    def test_rank_table_shape(self, rng):
        pm = random_persistence_module(rng, 5, 3)
        r = rank_table(pm)
        assert len(r) == 5 and all(len(row) == 6 for row in r)


class TestSpectralInvariant:
    def test_zero_class_is_infinite(self):
        assert spectral_invariant(s2_module(5), (0, 0)) == INF

    def test_fixture_degree_5(self):
        pm = s2_module(5)
        assert spectral_invariant(pm, (1, 0)) == 2 + EPS
        assert spectral_invariant(pm, (0, 1)) == 3 + EPS

    def test_identity_colimit_maps_give_first_grid_value(self):
        pm = PersistenceModule.constant([Fraction(-3, 2), 0, 5], 2)
        for a in all_classes(2)[1:]:
            assert spectral_invariant(pm, a) == Fraction(-3, 2)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            spectral_invariant(PersistenceModule.constant([0], 2), (1,))

    def test_non_archimedean(self, rng):
        for _ in range(40):
            pm = random_persistence_module(rng, 5, 3, colimit_dim=int(rng.integers(1, 4)))
            classes = all_classes(pm.colimit_dim)
            c = {a: spectral_invariant(pm, a) for a in classes}
            for a, b in itertools.product(classes, repeat=2):
                s = tuple((x + y) % 2 for x, y in zip(a, b))
                # c(0) = +inf by convention, so the ultrametric law concerns nonzero classes
                if not (any(a) and any(b) and any(s)):
                    continue
                assert c[s] <= max(c[a], c[b])
                if c[a] != c[b]:
                    assert c[s] == max(c[a], c[b])


class TestDualAndShift:
    def test_one_point_dual(self):
        pm = PersistenceModule.constant([Fraction(3, 2)], 2)
        d = dual(pm)
        assert d.grid == (Fraction(-3, 2),)
        assert d.dims == (2,) and d.colimit_dim == 2

    def test_single_colimit_bar_mirrors(self):
        pm = PersistenceModule.constant([0, 1, 2], 1)
        assert barcode(dual(pm)) == Barcode((Interval(-2, COLIMIT),))

    def test_mirror_rule_on_random_modules(self, rng):
        for _ in range(60):
            pm = random_persistence_module(rng, int(rng.integers(1, 6)), 3)
            assert validate(dual(pm)) is None
            assert barcode(dual(pm)) == mirror(barcode(pm), pm.grid)

    def test_double_dual_barcode(self, rng):
        # reflecting twice recovers every bar that does not touch the window ends
        pm = random_persistence_module(rng, 5, 3)
        dd = dual(dual(pm))
        assert dd.grid == pm.grid
        assert rank_table(dd)[0][:-1] == rank_table(pm)[0][:-1]

    def test_shift_zero_is_identity(self, rng):
        pm = random_persistence_module(rng, 4, 3)
        assert shift_values(pm, 0) == pm

    def test_shift_translates_bars_and_invariants(self, rng):
        for _ in range(30):
            pm = random_persistence_module(rng, 5, 3, colimit_dim=2)
            s = Fraction(int(rng.integers(-20, 20)), int(rng.integers(1, 7)))
            moved = shift_values(pm, s)
            assert barcode(moved) == barcode(pm).shift(s)
            for a in all_classes(2):
                assert spectral_invariant(moved, a) == spectral_invariant(pm, a) + s


class TestInterleaving:
    def test_self_interleaving_at_zero(self, rng):
        for _ in range(20):
            pm = random_persistence_module(rng, 5, 3)
            phi, psi = identity_interleaving(pm)
            assert verify_interleaving(pm, pm, 0, phi, psi) is None

    def test_constant_modules_one_step(self):
        pm = PersistenceModule.constant([0, 1, 2, 3], 1)
        ident = [Matrix.identity(1, GF2)] * 3
        assert verify_interleaving(pm, pm, 1, ident, ident) is None

    def test_zero_phi_fails_at_first_index(self):
        pm = PersistenceModule.constant([0, 1], 1)
        zero = [Matrix.zeros(1, 1, GF2)]
        ident = [Matrix.identity(1, GF2)]
        v = verify_interleaving(pm, pm, 0, [zero[0], zero[0]], [ident[0], ident[0]])
        assert v is not None and v.constraint == "psi_phi" and v.where == (0,)

    def test_shape_mismatch(self):
        pm = PersistenceModule.constant([0, 1], 1)
        with pytest.raises(ValueError):
            verify_interleaving(pm, pm, 0, [Matrix.identity(2, GF2)] * 2,
                                [Matrix.identity(1, GF2)] * 2)

    def test_grid_mismatch(self):
        with pytest.raises(ValueError):
            verify_interleaving(PersistenceModule.constant([0], 1),
                                PersistenceModule.constant([1], 1), 0, [], [])
