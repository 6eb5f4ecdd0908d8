import random
from fractions import Fraction

import pytest

from convdecomp import (
    BinaryPoint,
    ConvexCombination,
    DimensionMismatch,
    RVector,
    l1_distance,
    mix,
    squared_l2,
    to_rational,
)
from helpers import brute_force_sigma, cube_problem, random_combination

F = Fraction


class TestToRational:
    def test_accepts_int_str_fraction(self):
        assert to_rational(3) == F(3)
        assert to_rational("3/4") == F(3, 4)
        assert to_rational(" -7/3 ") == F(-7, 3)
        assert to_rational(F(1, 2)) == F(1, 2)

    def test_rejects_float(self):
        with pytest.raises(TypeError):
            to_rational(0.5)

    def test_string_round_trip(self):
        for q in (F(1, 2), F(3), F(-7, 3), F(0)):
            assert to_rational(str(q)) == q


class TestRVector:
    def test_arithmetic_is_exact(self):
        a = RVector(["1/3", "1/7"])
        b = RVector(["2/3", "6/7"])
        assert a + b == RVector([1, 1])
        assert (a + b) - b == a
        assert a.dot(b) == F(2, 9) + F(6, 49)
        assert a.scale("3") == RVector([1, "3/7"])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            RVector([1, 2]) + RVector([1, 2, 3])
        with pytest.raises(DimensionMismatch):
            RVector([1]).dot(RVector([1, 2]))

    def test_indexing_is_bounds_checked(self):
        v = RVector([1, 2])
        assert v[1] == 2
        with pytest.raises(IndexError):
            v[2]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            RVector([])

    def test_squared_l2_examples(self):
        assert squared_l2(RVector([0, 0])) == 0
        assert squared_l2(RVector(["1/2", "1/2"])) == F(1, 2)
        assert squared_l2(RVector(["3/5", "4/5"])) == 1

    def test_l1_distance_examples(self):
        v = RVector(["1/2", "1/2"])
        assert l1_distance(v, v) == 0
        assert l1_distance(v, RVector(["1/2", 0])) == F(1, 2)
        assert l1_distance(RVector([1, 0]), RVector([0, 1])) == 2

    def test_norms_nonnegative_zero_iff_zero(self):
        rng = random.Random(2024)
        for _ in range(200):
            n = rng.randint(1, 8)
            a = RVector([F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)])
            b = RVector([F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)])
            assert squared_l2(a - b) >= 0
            assert l1_distance(a, b) >= 0
            assert (squared_l2(a - b) == 0) == (a == b)
            assert (l1_distance(a, b) == 0) == (a == b)


class TestBinaryPoint:
    def test_bits_validated(self):
        with pytest.raises(ValueError):
            BinaryPoint([0, 2])
        with pytest.raises(ValueError):
            BinaryPoint([])

    def test_unit_and_origin(self):
        assert BinaryPoint.unit(3, 1) == BinaryPoint([0, 1, 0])
        assert BinaryPoint.origin(2).is_origin()
        with pytest.raises(IndexError):
            BinaryPoint.unit(2, 2)

    def test_minus_unit(self):
        p = BinaryPoint([1, 1, 0])
        assert p.minus_unit(0) == BinaryPoint([0, 1, 0])
        with pytest.raises(ValueError):
            p.minus_unit(2)

    def test_lexicographic_order(self):
        pts = [BinaryPoint(b) for b in ([1, 1], [0, 0], [1, 0], [0, 1])]
        assert [p.bits for p in sorted(pts)] == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_dominates(self):
        assert BinaryPoint([1, 1]).dominates(BinaryPoint([0, 1]))
        assert not BinaryPoint([0, 1]).dominates(BinaryPoint([1, 0]))

    def test_as_vector(self):
        assert BinaryPoint([1, 0, 1]).as_vector() == RVector([1, 0, 1])


class TestConvexCombination:
    def test_point_mass_examples(self):
        for bits in ([0, 0], [1, 0], [1, 1, 0]):
            p = BinaryPoint(bits)
            lam = ConvexCombination.point_mass(p)
            assert lam.items() == ((p, F(1)),)

    def test_barycenter_examples(self):
        lam = ConvexCombination({BinaryPoint([0, 0]): 1})
        assert lam.barycenter() == RVector([0, 0])
        lam = ConvexCombination({BinaryPoint([1, 0]): "1/2", BinaryPoint([0, 0]): "1/2"})
        assert lam.barycenter() == RVector(["1/2", 0])
        lam = ConvexCombination(
            {
                BinaryPoint([1, 1]): "1/4",
                BinaryPoint([0, 1]): "1/4",
                BinaryPoint([0, 0]): "1/2",
            }
        )
        assert lam.barycenter() == RVector(["1/4", "1/2"])

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            ConvexCombination({BinaryPoint([0, 1]): F(1, 2)})

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            ConvexCombination(
                {BinaryPoint([0, 1]): F(3, 2), BinaryPoint([1, 0]): F(-1, 2)}
            )

    def test_zero_weights_dropped(self):
        lam = ConvexCombination({BinaryPoint([0, 1]): 1, BinaryPoint([1, 0]): 0})
        assert lam.support() == (BinaryPoint([0, 1]),)
        assert lam.weight(BinaryPoint([1, 0])) == 0

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(DimensionMismatch):
            ConvexCombination(
                {BinaryPoint([0, 1]): F(1, 2), BinaryPoint([1, 0, 0]): F(1, 2)}
            )

    def test_support_iteration_is_lexicographic(self):
        lam = ConvexCombination(
            {BinaryPoint([1, 1]): "1/3", BinaryPoint([0, 1]): "1/3", BinaryPoint([1, 0]): "1/3"}
        )
        assert [p.bits for p in lam.support()] == [(0, 1), (1, 0), (1, 1)]


class TestMix:
    def test_identity_mixture(self):
        a = ConvexCombination({BinaryPoint([1, 0]): "1/2", BinaryPoint([0, 0]): "1/2"})
        b = ConvexCombination.point_mass(BinaryPoint([1, 1]))
        assert mix(a, 1, b, 0) == a

    def test_hand_merge(self):
        a = ConvexCombination.point_mass(BinaryPoint([0, 0]))
        b = ConvexCombination.point_mass(BinaryPoint([1, 0]))
        merged = mix(a, "1/2", b, "1/2")
        assert merged == ConvexCombination(
            {BinaryPoint([0, 0]): "1/2", BinaryPoint([1, 0]): "1/2"}
        )

    def test_same_support_point(self):
        a = ConvexCombination.point_mass(BinaryPoint([1, 0]))
        assert mix(a, "1/3", a, "2/3") == a

    def test_weights_validated(self):
        a = ConvexCombination.point_mass(BinaryPoint([1, 0]))
        with pytest.raises(ValueError):
            mix(a, "1/2", a, "1/3")
        with pytest.raises(ValueError):
            mix(a, "3/2", a, "-1/2")
        with pytest.raises(DimensionMismatch):
            mix(a, "1/2", ConvexCombination.point_mass(BinaryPoint([1, 0, 0])), "1/2")


class TestRandomizedProperties:
    def test_combination_invariants(self):
        rng = random.Random(501)
        for _ in range(150):
            n = rng.randint(1, 8)
            prob = cube_problem(n)
            lam = random_combination(rng, prob.polytope.points, max_support=5)
            total = sum((w for _, w in lam.items()), F(0))
            assert total == 1
            assert all(w > 0 for _, w in lam.items())
            sigma = lam.barycenter()
            assert all(0 <= c <= 1 for c in sigma)
            assert sigma == brute_force_sigma(lam)

    def test_mix_is_exact_and_support_bounded(self):
        rng = random.Random(502)
        for _ in range(150):
            n = rng.randint(1, 8)
            prob = cube_problem(n)
            a = random_combination(rng, prob.polytope.points, max_support=4)
            b = random_combination(rng, prob.polytope.points, max_support=4)
            wa = F(rng.randint(0, 16), 16)
            merged = mix(a, wa, b, 1 - wa)
            expected = a.barycenter().scale(wa) + b.barycenter().scale(1 - wa)
            assert merged.barycenter() == expected
            assert merged.support_size <= a.support_size + b.support_size
