"""
Unit tests for spheres, homogeneous varieties and affine subspaces inside spheres.
"""
import numpy as np
import pytest

from ffharmonic.errors import BudgetExceeded, ZeroArgument
from ffharmonic.field import case_tag, max_affine_dimension, make_field
from ffharmonic.grid import all_coords
from ffharmonic.models import AffineSubspace, CaseKind, VarietyKind
from ffharmonic.varieties import (
    affine_contains,
    affine_indices,
    affine_is_proper,
    bruteforce_max_affine,
    build_affine_in_sphere,
    dual_spec,
    hom_fourier_bruteforce,
    hom_fourier_bruteforce_many,
    hom_fourier_closed,
    hom_fourier_closed_table,
    homogeneous_spec,
    lift_to_homogeneous,
    membership_mask,
    random_affine_subspace,
    sparse_points,
    sphere_size_closed,
    sphere_spec,
    variety_points,
)

SMALL_CELLS = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3), (7, 2)]


class TestVarietySpec:
    """Tests for VarietySpec construction."""

    def test_j_is_reduced(self):
        """Test that j is stored mod q."""
        assert sphere_spec(make_field(5), 2, 7).j == 2

    @pytest.mark.parametrize("j", [0, 3, -3])
    def test_zero_j(self, j):
        """Test that j = 0 mod q is rejected."""
        with pytest.raises(ZeroArgument):
            sphere_spec(make_field(3), 2, j)

    def test_dual_inverts_j(self):
        """Test that the dual of H_j is H_{1/j} and dualizing twice returns H_j."""
        spec = homogeneous_spec(make_field(7), 2, 3)
        dual = dual_spec(spec)
        assert dual.kind is VarietyKind.DUAL_HOMVARIETY
        assert dual.effective_j == 5
        assert dual_spec(dual).kind is VarietyKind.HOMVARIETY

    def test_sphere_has_no_dual(self):
        """Test that spheres are refused by dual_spec."""
        with pytest.raises(ValueError):
            dual_spec(sphere_spec(make_field(3), 2, 1))

    def test_ambient_dimensions(self):
        """Test that spheres live in F_q^d and varieties in F_q^{d+1}."""
        prime_field = make_field(3)
        assert sphere_spec(prime_field, 3, 1).ambient_dim == 3
        assert homogeneous_spec(prime_field, 3, 1).ambient_dim == 4


class TestEnumeration:
    """Tests for variety_points and the closed-form sizes."""

    def test_unit_circle_mod_3(self):
        """Test that x^2 + y^2 = 1 over F_3 has the four points (+-1, 0), (0, +-1)."""
        points = variety_points(sphere_spec(make_field(3), 2, 1))
        assert points.size == 4
        coords = {tuple(row) for row in all_coords(3, 2)[points.points].tolist()}
        assert coords == {(1, 0), (2, 0), (0, 1), (0, 2)}

    def test_homogeneous_variety_size(self):
        """Test |H_1^2| = 9 over F_3."""
        assert variety_points(homogeneous_spec(make_field(3), 2, 1)).size == 9

    def test_empty_sphere(self):
        """Test that x^2 = 2 has no solution mod 3."""
        assert variety_points(sphere_spec(make_field(3), 1, 2)).size == 0

    @pytest.mark.parametrize("q, d", SMALL_CELLS + [(3, 4), (3, 5), (5, 4)])
    def test_sphere_sizes(self, q, d):
        """Test that enumeration agrees with the closed form for every j."""
        prime_field = make_field(q)
        for j in range(1, q):
            spec = sphere_spec(prime_field, d, j)
            assert variety_points(spec).size == sphere_size_closed(prime_field, d, j)

    def test_points_satisfy_equation(self):
        """Test that every enumerated point of H_2^3 over F_5 satisfies ||x|| = 2 x_4^2."""
        spec = homogeneous_spec(make_field(5), 3, 2)
        coords = all_coords(5, 4)[variety_points(spec).points]
        assert np.all((coords[:, :3] ** 2).sum(axis=1) % 5 == (2 * coords[:, 3] ** 2) % 5)

    def test_mask_round_trip(self):
        """Test that the point set mask selects exactly the enumerated points."""
        points = variety_points(homogeneous_spec(make_field(3), 2, 2))
        assert np.flatnonzero(points.mask()).tolist() == points.points.tolist()

    def test_ambient_budget(self):
        """Test that a grid larger than the cap raises BudgetExceeded."""
        with pytest.raises(BudgetExceeded) as exc_info:
            variety_points(homogeneous_spec(make_field(3), 2, 1), max_ambient_points=10)
        assert exc_info.value.cap_name == "max_ambient_points"
        assert exc_info.value.required == 27

    def test_sparse_points(self):
        """Test the number of points with at most two nonzero coordinates."""
        q, n = 3, 4
        expected = 1 + n * (q - 1) + (n * (n - 1) // 2) * (q - 1) ** 2
        assert sparse_points(q, n).shape == (expected, n)


class TestHomogeneousFourier:
    """Tests for the closed form of the Fourier transform of 1_H."""

    @pytest.mark.parametrize("q, d", SMALL_CELLS)
    def test_closed_form_matches_bruteforce(self, q, d):
        """Test the closed form against the character sum at every M."""
        prime_field = make_field(q)
        for j in range(1, q):
            for spec in (homogeneous_spec(prime_field, d, j), dual_spec(homogeneous_spec(prime_field, d, j))):
                points = variety_points(spec)
                brute = hom_fourier_bruteforce_many(spec, all_coords(q, d + 1), points)
                closed = hom_fourier_closed_table(spec)
                np.testing.assert_allclose(brute, closed, atol=1e-6 * q ** ((d + 1) / 2))

    @pytest.mark.parametrize("q, d", [(3, 4), (3, 5), (5, 4), (5, 5), (7, 4), (7, 5)])
    def test_closed_form_on_sampled_points(self, q, d):
        """Test the closed form against the character sum at 200 seeded M and every sparse M, for every j."""
        prime_field = make_field(q)
        n = d + 1
        rng = np.random.default_rng(q * 100 + d)
        Ms = np.vstack([rng.integers(0, q, size=(200, n)), sparse_points(q, n)])
        indices = Ms @ (q ** np.arange(n))
        for j in range(1, q):
            spec = homogeneous_spec(prime_field, d, j)
            brute = hom_fourier_bruteforce_many(spec, Ms, variety_points(spec))
            closed = hom_fourier_closed_table(spec)[indices]
            np.testing.assert_allclose(brute, closed, atol=1e-6 * q ** (n / 2))

    def test_value_at_zero_is_size(self):
        """Test that the transform at 0 counts the points."""
        spec = homogeneous_spec(make_field(5), 3, 1)
        assert hom_fourier_closed(spec, (0, 0, 0, 0)) == variety_points(spec).size

    def test_single_point_agrees(self):
        """Test one scalar evaluation against the brute-force oracle."""
        spec = homogeneous_spec(make_field(5), 2, 2)
        M = (1, 3, 4)
        assert hom_fourier_bruteforce(spec, np.array(M)) == pytest.approx(hom_fourier_closed(spec, M), abs=1e-9)

    def test_closed_form_values_are_integers(self):
        """Test that the transform of 1_H is integer valued."""
        spec = homogeneous_spec(make_field(7), 3, 3)
        table = hom_fourier_closed_table(spec)
        assert table.dtype == np.int64

    def test_even_d_off_dual_magnitude(self):
        """Test |H_hat| = q^(d/2) off the dual variety for even d."""
        spec = homogeneous_spec(make_field(5), 2, 1)
        table = hom_fourier_closed_table(spec)
        dual = membership_mask(dual_spec(spec), all_coords(5, 3))
        assert set(np.abs(table[~dual]).tolist()) <= {5}

    def test_sphere_refused(self):
        """Test that spheres are refused by the closed form."""
        with pytest.raises(ValueError):
            hom_fourier_closed(sphere_spec(make_field(3), 2, 1), (0, 0))


class TestAffineConstruction:
    """Tests for build_affine_in_sphere and the brute-force maximality check."""

    @pytest.mark.parametrize("q", [3, 5, 7, 11, 13])
    @pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
    def test_dimension_and_containment(self, q, d):
        """Test that the constructed subspace has the maximal dimension for its case and lies in the sphere."""
        prime_field = make_field(q)
        for j in range(1, q):
            subspace = build_affine_in_sphere(prime_field, d, j, seed=j)
            assert subspace.k == max_affine_dimension(case_tag(prime_field, d, j))
            assert affine_is_proper(subspace)
            assert affine_contains(subspace, sphere_spec(prime_field, d, j))

    @pytest.mark.parametrize(
        "q, d, j, k",
        [(5, 3, 1, 1), (5, 2, 1, 0), (3, 5, 2, 1), (3, 5, 1, 2), (3, 4, 1, 1)],
    )
    def test_examples(self, q, d, j, k):
        """Test known maximal dimensions."""
        assert build_affine_in_sphere(make_field(q), d, j).k == k

    def test_seed_is_deterministic(self):
        """Test that one seed always yields the same subspace."""
        prime_field = make_field(7)
        first = build_affine_in_sphere(prime_field, 5, 3, seed=11)
        second = build_affine_in_sphere(prime_field, 5, 3, seed=11)
        assert first.base == second.base
        assert first.directions == second.directions

    @pytest.mark.parametrize("q, d", [(3, 2), (3, 3), (5, 2), (5, 3)])
    def test_bruteforce_maximality(self, q, d):
        """Test that no larger affine subspace fits in the sphere."""
        prime_field = make_field(q)
        for j in range(1, q):
            expected = max_affine_dimension(case_tag(prime_field, d, j))
            assert bruteforce_max_affine(prime_field, d, j, k_max=expected + 1) == expected

    def test_bruteforce_budget(self):
        """Test that the candidate limit is enforced."""
        with pytest.raises(BudgetExceeded) as exc_info:
            bruteforce_max_affine(make_field(5), 3, 1, k_max=2, candidate_limit=1)
        assert exc_info.value.cap_name == "subspace_candidate_limit"

    def test_bruteforce_empty_sphere(self):
        """Test that an empty sphere reports -1."""
        assert bruteforce_max_affine(make_field(3), 1, 2, k_max=0) == -1

    def test_lift_lies_in_homogeneous_variety(self):
        """Test that (x, 1) for x in the subspace lands in H_j^d."""
        prime_field = make_field(5)
        subspace = build_affine_in_sphere(prime_field, 3, 1)
        lifted = lift_to_homogeneous(subspace)
        variety = variety_points(homogeneous_spec(prime_field, 3, 1))
        assert np.isin(lifted, variety.points).all()
        assert lifted.size == 5 ** subspace.k

    def test_case_kind_of_example(self):
        """Test that q=5, d=3, j=1 is the square case of d = 3 mod 4."""
        assert case_tag(make_field(5), 3, 1).kind is CaseKind.D3MOD4_NEG_SQ


class TestAffineHelpers:
    """Tests for affine subspace helpers."""

    def test_indices_are_distinct(self):
        """Test that a proper subspace has q^k distinct points."""
        subspace = AffineSubspace(make_field(3), (1, 1, 0), ((1, 0, 0), (0, 1, 2)))
        assert np.unique(affine_indices(subspace)).size == 9

    def test_improper_subspace(self):
        """Test that dependent directions are flagged."""
        subspace = AffineSubspace(make_field(3), (0, 0), ((1, 2), (2, 1)))
        assert not affine_is_proper(subspace)

    def test_random_subspace(self):
        """Test that random subspaces have independent directions."""
        rng = np.random.default_rng(0)
        for k in range(4):
            subspace = random_affine_subspace(make_field(5), 3, k, rng)
            assert subspace.k == k
            assert affine_is_proper(subspace)

    def test_random_subspace_too_large(self):
        """Test that k > n is rejected."""
        with pytest.raises(ValueError):
            random_affine_subspace(make_field(3), 2, 3, np.random.default_rng(0))
