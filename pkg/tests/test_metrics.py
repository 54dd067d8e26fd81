import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pgfmetrics import (
    dirac,
    ell_norm,
    estimate_norm_constant,
    make_dist,
    pgf_eval,
    random_dist,
    random_equal_mean_pair,
    toscani_distance,
    toscani_profile,
    total_variation,
)
from pgfmetrics.errors import DomainError, EmptyVector, UnsupportedOrder
from pgfmetrics.metrics import ToscaniResult

from helpers import equal_mean_triple, prob_vectors

MIX = [0.5, 0.0, 0.5]  # (delta_0 + delta_2) / 2, mean 1


class TestToscaniDistance:
    def test_identical_inputs(self):
        d = make_dist([0.2, 0.3, 0.5])
        res = toscani_distance(d, d, 1)
        assert res.value == 0.0
        assert res.argmax_z is not None

    def test_order1_point_masses(self):
        # |f^ - g^| = 1 - z, so the ratio is identically 1
        res = toscani_distance(dirac(0), dirac(1), 1)
        assert res.value == pytest.approx(1.0, abs=1e-12)

    def test_order2_constant_ratio(self):
        # f^ - g^ = z - (1 + z^2)/2 = -(1 - z)^2 / 2
        res = toscani_distance(dirac(1), make_dist(MIX), 2)
        assert res.value == pytest.approx(0.5, abs=1e-12)

    def test_order2_unequal_means_is_infinite(self):
        res = toscani_distance(dirac(0), dirac(1), 2)
        assert math.isinf(res.value)
        assert res.argmax_z is None

    def test_unsupported_order(self):
        with pytest.raises(UnsupportedOrder):
            toscani_distance(dirac(0), dirac(1), 3)

    @given(prob_vectors(), prob_vectors())
    def test_symmetry(self, f, g):
        a = toscani_distance(f, g, 1)
        b = toscani_distance(g, f, 1)
        assert a.value == b.value

    def test_positive_for_distinct_inputs(self):
        f = make_dist([0.4, 0.6])
        g = make_dist([0.4 + 1e-6, 0.6 - 1e-6])
        assert toscani_distance(f, g, 1).value > 1e-8

    def test_triangle_order1_random(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            f, g, h = (random_dist(8, rng) for _ in range(3))
            dfh = toscani_distance(f, h, 1).value
            dfg = toscani_distance(f, g, 1).value
            dgh = toscani_distance(g, h, 1).value
            assert dfh <= dfg + dgh + 1e-9

    def test_triangle_order2_equal_mean(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            f, g, h = equal_mean_triple(rng)
            dfh = toscani_distance(f, h, 2).value
            dfg = toscani_distance(f, g, 2).value
            dgh = toscani_distance(g, h, 2).value
            assert dfh <= dfg + dgh + 1e-9

    def test_polynomial_form_matches_direct_ratio_order1_any_pair(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            f, g = random_dist(12, rng), random_dist(12, rng)
            for z, ratio in toscani_profile(f, g, 1, 81):
                if 0.1 <= z <= 0.9:
                    direct = abs(pgf_eval(f, z) - pgf_eval(g, z)) / (1.0 - z)
                    assert abs(ratio - direct) < 1e-10

    def test_polynomial_form_matches_direct_ratio_both_orders(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            f, g = random_equal_mean_pair(10, rng)
            for s in (1, 2):
                pairs = toscani_profile(f, g, s, 81)
                for z, ratio in pairs:
                    if 0.1 <= z <= 0.9:
                        direct = abs(pgf_eval(f, z) - pgf_eval(g, z)) / (1.0 - z) ** s
                        assert abs(ratio - direct) < 1e-10


class TestToscaniProfile:
    def test_identical_inputs_all_zero(self):
        d = make_dist([0.3, 0.7])
        assert all(r == 0.0 for _, r in toscani_profile(d, d, 1, 9))

    def test_constant_ratio_case(self):
        pairs = toscani_profile(dirac(1), make_dist(MIX), 2, 5)
        assert [z for z, _ in pairs] == [0.0, 0.25, 0.5, 0.75, 1.0]
        for _, r in pairs:
            assert r == pytest.approx(0.5, abs=1e-12)

    def test_sup_dominates_grid(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            f, g = random_dist(10, rng), random_dist(10, rng)
            dist = toscani_distance(f, g, 1).value
            grid_max = max(r for _, r in toscani_profile(f, g, 1, 64))
            assert grid_max <= dist + 1e-12

    def test_unequal_means_order2_diverges_at_one(self):
        pairs = toscani_profile(dirac(0), dirac(1), 2, 5)
        assert math.isinf(pairs[-1][1])
        assert all(math.isfinite(r) for _, r in pairs[:-1])

    def test_grid_size_validation(self):
        with pytest.raises(DomainError):
            toscani_profile(dirac(0), dirac(1), 1, 1)


class TestEllNorm:
    def test_zero_vector(self):
        assert ell_norm([0.0, 0.0, 0.0]) == 0.0

    def test_first_basis_vector(self):
        # polynomial is the constant 1
        assert ell_norm([1.0, 0.0, 0.0, 0.0]) == pytest.approx(1.0, abs=1e-12)

    def test_last_basis_vector(self):
        # polynomial 1 + z + ... + z^{N-1}, maximal at z = 1
        for n in (1, 2, 5, 9):
            a = np.zeros(n)
            a[-1] = 1.0
            assert ell_norm(a) == pytest.approx(float(n), abs=1e-10)

    def test_empty_vector(self):
        with pytest.raises(EmptyVector):
            ell_norm([])

    @given(
        st.lists(st.floats(-5, 5), min_size=1, max_size=10),
        st.floats(-4, 4),
    )
    def test_absolute_homogeneity(self, a, c):
        a = np.asarray(a)
        scale = max(1.0, ell_norm(a))
        assert abs(ell_norm(c * a) - abs(c) * ell_norm(a)) < 1e-10 * scale * max(1.0, abs(c))

    @given(
        st.lists(st.floats(-5, 5), min_size=1, max_size=10),
        st.lists(st.floats(-5, 5), min_size=1, max_size=10),
    )
    def test_triangle_inequality(self, a, b):
        n = max(len(a), len(b))
        a = np.pad(np.asarray(a), (0, n - len(a)))
        b = np.pad(np.asarray(b), (0, n - len(b)))
        assert ell_norm(a + b) <= ell_norm(a) + ell_norm(b) + 1e-9

    def test_definiteness_on_random_vectors(self):
        rng = np.random.default_rng(10)
        for _ in range(100):
            a = rng.standard_normal(rng.integers(1, 20))
            assert ell_norm(a) > 0.0


class TestNormConstantEstimate:
    def test_dimension_one_is_exactly_one(self):
        est = estimate_norm_constant(1, 10, np.random.default_rng(0))
        assert abs(est - 1.0) < 1e-9

    def test_dimension_two_reaches_two(self):
        est = estimate_norm_constant(2, 16, np.random.default_rng(0))
        assert est >= 2.0 - 1e-6

    def test_estimate_never_below_a_sampled_ratio(self):
        rng = np.random.default_rng(1)
        est = estimate_norm_constant(4, 32, np.random.default_rng(1))
        for _ in range(32):
            a = rng.standard_normal(4)
            ratio = np.abs(a).sum() / ell_norm(a)
            assert ratio <= est + 1e-9

    def test_monotone_in_trials(self):
        values = [
            estimate_norm_constant(3, t, np.random.default_rng(2))
            for t in (1, 2, 4, 8, 16)
        ]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))

    def test_validation(self):
        with pytest.raises(DomainError):
            estimate_norm_constant(0, 5, np.random.default_rng(0))
        with pytest.raises(DomainError):
            estimate_norm_constant(2, 0, np.random.default_rng(0))


class TestToscaniResult:
    def test_finite_value_requires_argmax(self):
        with pytest.raises(DomainError):
            ToscaniResult(1.0, None, 3)

    def test_negative_value_rejected(self):
        with pytest.raises(DomainError):
            ToscaniResult(-0.5, 0.3, 3)


def test_total_variation_basic():
    assert total_variation(dirac(0), dirac(1)) == 1.0
    assert total_variation(dirac(0), dirac(0)) == 0.0
    assert total_variation(make_dist([0.5, 0.5]), dirac(0)) == 0.5
