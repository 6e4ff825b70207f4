"""
Unit tests for grid encoding, Fourier transforms, norms and dyadic level sets.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffharmonic.errors import BudgetExceeded, EmptyDomain, NotNormalized, OutOfRangeValue, UnsupportedExponent
from ffharmonic.field import make_field
from ffharmonic.grid import (
    all_coords,
    check_dyadic_mass,
    decode,
    default_truncation,
    dilation_index,
    dyadic_decompose,
    dyadic_transform_ratio,
    encode,
    fourier_transform,
    inverse_fourier_transform,
    lp_norm,
    majorant_violation,
    norm_nesting_holds,
    plancherel_error,
    transform_values,
)
from ffharmonic.models import GridFunction, Measure


def _random_grid(q: int, n: int, seed: int = 0) -> GridFunction:
    rng = np.random.default_rng(seed)
    size = q ** n
    return GridFunction(make_field(q), n, rng.standard_normal(size) + 1j * rng.standard_normal(size))


class TestEncoding:
    """Tests for point encoding."""

    def test_first_coordinate_least_significant(self):
        """Test that x_0 is the lowest base-q digit."""
        assert encode([1, 2], 3) == 1 + 2 * 3
        assert decode(7, 3, 2) == (1, 2)

    def test_all_coords_rows_match_indices(self):
        """Test that row i of all_coords encodes back to i."""
        coords = all_coords(5, 3)
        assert coords.shape == (125, 3)
        np.testing.assert_array_equal(encode(coords, 5), np.arange(125))

    def test_encode_reduces_mod_q(self):
        """Test that negative coordinates are reduced."""
        assert encode([-1, 0], 5) == 4

    def test_dilation_is_permutation(self):
        """Test that x -> t x permutes F_q^n for t != 0."""
        perm = dilation_index(7, 2, 3)
        assert sorted(perm.tolist()) == list(range(49))
        assert perm[0] == 0


class TestFourierTransform:
    """Tests for the transform pair."""

    def test_delta_at_zero(self):
        """Test that the transform of delta_0 is identically 1."""
        g = GridFunction.indicator(make_field(3), 2, [0])
        np.testing.assert_allclose(fourier_transform(g).values, np.ones(9), atol=1e-12)

    def test_constant_function(self):
        """Test that the transform of 1 is q^d delta_0."""
        g = GridFunction(make_field(5), 2, np.ones(25))
        expected = np.zeros(25)
        expected[0] = 25
        np.testing.assert_allclose(fourier_transform(g).values, expected, atol=1e-9)

    def test_character_sign(self):
        """Test g_hat(x) = sum_m chi(-m.x) g(m) on a point mass."""
        prime_field = make_field(5)
        g = GridFunction.indicator(prime_field, 1, [2])
        x = np.arange(5)
        np.testing.assert_allclose(fourier_transform(g).values, prime_field.chi_table[(-2 * x) % 5], atol=1e-12)

    @pytest.mark.parametrize("q, n", [(3, 1), (3, 3), (5, 2), (7, 2), (3, 5)])
    def test_inversion(self, q, n):
        """Test that the inverse transform undoes the forward transform."""
        g = _random_grid(q, n, seed=q + n)
        recovered = inverse_fourier_transform(fourier_transform(g))
        np.testing.assert_allclose(recovered.values, g.values, atol=1e-9)

    @pytest.mark.parametrize("q, n", [(3, 2), (3, 4), (5, 2), (7, 2)])
    def test_direct_matches_factorized(self, q, n):
        """Test that both transform paths agree."""
        g = _random_grid(q, n, seed=1)
        direct = fourier_transform(g, method="direct").values
        factorized = fourier_transform(g).values
        np.testing.assert_allclose(direct, factorized, atol=1e-8 * q ** n)

    def test_direct_budget(self):
        """Test that the dense transform refuses large grids."""
        g = GridFunction.zeros(make_field(3), 6)
        with pytest.raises(BudgetExceeded) as exc_info:
            fourier_transform(g, method="direct")
        assert exc_info.value.cap_name == "direct_transform_limit"

    def test_unknown_method(self):
        """Test that an unknown method name is rejected."""
        with pytest.raises(ValueError):
            transform_values(np.zeros(3), make_field(3), 1, method="fft")

    def test_batched_transform(self):
        """Test that a stack of functions is transformed row by row."""
        prime_field = make_field(3)
        stack = np.stack([_random_grid(3, 2, seed=s).values for s in range(4)])
        batched = transform_values(stack, prime_field, 2)
        for row, values in zip(batched, stack):
            np.testing.assert_allclose(row, transform_values(values, prime_field, 2), atol=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(q=st.sampled_from([3, 5, 7]), n=st.integers(min_value=1, max_value=3), seed=st.integers(0, 2**32 - 1))
    def test_plancherel(self, q, n, seed):
        """Test sum |g_hat|^2 = q^d sum |g|^2."""
        assert plancherel_error(_random_grid(q, n, seed)) <= 1e-8

    def test_plancherel_zero_function(self):
        """Test that the zero function has no Plancherel error."""
        assert plancherel_error(GridFunction.zeros(make_field(3), 2)) == 0.0

    def test_grid_function_shape_check(self):
        """Test that a GridFunction rejects the wrong number of values."""
        with pytest.raises(ValueError):
            GridFunction(make_field(3), 2, np.zeros(8))


class TestNorms:
    """Tests for lp_norm."""

    def test_counting_and_normalized(self):
        """Test both measures on a small vector."""
        values = np.array([3.0, 4.0, 0.0, 0.0])
        assert lp_norm(values, 2) == pytest.approx(5.0)
        assert lp_norm(values, 2, Measure.NORMALIZED) == pytest.approx(2.5)
        assert lp_norm(values, 1) == pytest.approx(7.0)

    def test_infinity(self):
        """Test that the sup norm ignores the measure."""
        values = np.array([1.0, -6.0, 2.0])
        assert lp_norm(values, math.inf) == 6.0
        assert lp_norm(values, math.inf, Measure.NORMALIZED) == 6.0

    def test_domain_selection(self):
        """Test that the domain restricts the sum."""
        values = np.array([1.0, 10.0, 1.0])
        assert lp_norm(values, 1, domain=np.array([0, 2])) == pytest.approx(2.0)

    def test_empty_domain(self):
        """Test that an empty domain raises EmptyDomain."""
        with pytest.raises(EmptyDomain):
            lp_norm(np.ones(3), 2, domain=np.array([], dtype=np.int64))

    @pytest.mark.parametrize("p", [0.5, 0, -1, float("nan")])
    def test_unsupported_exponent(self, p):
        """Test that exponents below 1 are rejected."""
        with pytest.raises(UnsupportedExponent):
            lp_norm(np.ones(3), p)

    def test_nesting(self):
        """Test l^p2 <= l^p1 for p1 <= p2 on counting measure."""
        values = _random_grid(3, 3).values
        for p1, p2 in [(1, 2), (1.5, 4), (2, math.inf)]:
            assert norm_nesting_holds(values, p1, p2)


class TestDyadic:
    """Tests for the dyadic level-set decomposition."""

    def _function(self, values) -> GridFunction:
        padded = np.zeros(9)
        padded[: len(values)] = values
        return GridFunction(make_field(3), 2, padded)

    def test_levels(self):
        """Test that boundary values land in the right level."""
        decomposition = dyadic_decompose(self._function([1.0, 0.5, 0.3, 0.25, 0.0]), K=4)
        assert decomposition.levels[0].tolist() == [0]
        assert decomposition.levels[1].tolist() == [1, 2]
        assert decomposition.levels[2].tolist() == [3]
        assert decomposition.level_sizes() == [1, 2, 1, 0, 0]

    def test_majorant(self):
        """Test that the majorant rounds up to powers of two."""
        decomposition = dyadic_decompose(self._function([1.0, 0.5, 0.3, 0.25]), K=4)
        np.testing.assert_allclose(decomposition.majorant.values.real[:5], [1.0, 0.5, 0.5, 0.25, 0.0])
        assert majorant_violation(decomposition) == 0.0

    def test_truncation_drops_small_values(self):
        """Test that levels beyond K are left out of the majorant."""
        decomposition = dyadic_decompose(self._function([1.0, 2.0 ** -10]), K=3)
        assert decomposition.majorant.values[1] == 0
        assert sum(decomposition.level_sizes()) == 1

    def test_default_truncation(self):
        """Test K = ceil(n log2 q)."""
        assert default_truncation(3, 2) == 4
        assert dyadic_decompose(self._function([1.0])).truncation == 4

    @pytest.mark.parametrize("values", [[1.5], [-0.1]])
    def test_out_of_range(self, values):
        """Test that values outside [0, 1] are rejected."""
        with pytest.raises(OutOfRangeValue):
            dyadic_decompose(self._function(values))

    def test_complex_values_rejected(self):
        """Test that complex functions are rejected."""
        F = GridFunction(make_field(3), 1, np.array([0.5j, 0, 0]))
        with pytest.raises(OutOfRangeValue):
            dyadic_decompose(F)

    def test_negative_truncation(self):
        """Test that K < 0 is rejected."""
        with pytest.raises(ValueError):
            dyadic_decompose(self._function([1.0]), K=-1)

    @pytest.mark.parametrize("p", [1, 1.5, 2, 3])
    def test_mass_bound(self, p):
        """Test sum 2^(-pk) |F_k| <= 2^p on a normalized random function."""
        rng = np.random.default_rng(7)
        raw = rng.random(27)
        F = GridFunction(make_field(3), 3, raw / np.sum(raw ** p) ** (1.0 / p))
        report = check_dyadic_mass(F, p)
        assert report.passed
        assert report.bound == pytest.approx(2.0 ** p)

    def test_mass_needs_normalization(self):
        """Test that an unnormalized function raises NotNormalized."""
        with pytest.raises(NotNormalized):
            check_dyadic_mass(self._function([0.5, 0.5]), 2)

    def test_transform_ratio_on_indicator(self):
        """Test that an indicator is its own majorant."""
        F = self._function([1.0, 1.0, 0.0, 1.0])
        decomposition = dyadic_decompose(F)
        assert dyadic_transform_ratio(decomposition, np.arange(9)) == pytest.approx(1.0)

    def test_transform_ratio_zero(self):
        """Test that 0/0 is reported as nan."""
        decomposition = dyadic_decompose(self._function([]))
        assert math.isnan(dyadic_transform_ratio(decomposition, np.arange(9)))
