"""Tests for shared subspace dimension and constructive alignment."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multiway_dof.errors import AlignmentDimensionError, DegenerateChannelError
from multiway_dof.generators.alignment import (
    ALIGN_RTOL,
    numerical_shared_dim,
    receiver_filters,
    shared_dim,
    shared_subspace,
)
from multiway_dof.utils.linalg import complex_gaussian, numerical_rank


def random_pair(seed, p, q1, q2):
    rng = np.random.default_rng(seed)
    return complex_gaussian(rng, (p, q1)), complex_gaussian(rng, (p, q2))


class TestSharedDim:
    """Tests for the generic intersection dimension."""

    @pytest.mark.parametrize(
        "p, q1, q2, expected",
        [(4, 3, 2, 1), (3, 4, 2, 2), (5, 2, 2, 0), (2, 3, 3, 2)],
    )
    def test_examples(self, p, q1, q2, expected):
        """Both antenna-ordering conditions and the corner cases."""
        assert shared_dim(p, q1, q2) == expected

    @given(st.integers(1, 12), st.integers(1, 12), st.integers(1, 12))
    def test_symmetric(self, p, q1, q2):
        """Swapping the two users changes nothing."""
        assert shared_dim(p, q1, q2) == shared_dim(p, q2, q1)

    def test_matches_numerical_intersection(self):
        """The formula equals the numerical intersection rank of random matrices."""
        for seed in range(1000):
            rng = np.random.default_rng(seed)
            p, q1, q2 = rng.integers(1, 13, size=3)
            h1, h2 = random_pair(seed, p, q1, q2)
            assert numerical_shared_dim(h1, h2) == shared_dim(p, q1, q2), (p, q1, q2)


class TestSharedSubspace:
    """Tests for constructive shared directions."""

    def test_null_space_route(self):
        """p=4, q1=3, q2=2, d=1 aligns within tolerance."""
        h1, h2 = random_pair(11, 4, 3, 2)
        result = shared_subspace(h1, h2, 1)

        assert result.dimension == 1
        assert result.residual <= ALIGN_RTOL
        np.testing.assert_allclose(h1 @ result.u, result.directions, atol=1e-8)
        np.testing.assert_allclose(h2 @ result.w, result.directions, atol=1e-8)
        assert np.linalg.norm(result.directions[:, 0]) > 0

    def test_saturates_smaller_user(self):
        """p=3, q1=4, q2=2, d=2 uses all of user 2's space."""
        h1, h2 = random_pair(3, 3, 4, 2)
        result = shared_subspace(h1, h2, 2)

        assert numerical_rank(result.w) == 2
        assert numerical_rank(result.directions) == 2

    def test_identity_maps(self):
        """Identical identity maps share the standard basis."""
        eye = np.eye(3, dtype=complex)
        result = shared_subspace(eye, eye, 3)

        np.testing.assert_allclose(result.directions, eye)
        np.testing.assert_allclose(result.u, eye)
        np.testing.assert_allclose(result.w, eye)

    def test_direct_route_with_random_targets(self):
        """Users with more antennas than the relay reach random targets."""
        h1, h2 = random_pair(5, 3, 5, 4)
        result = shared_subspace(h1, h2, 3, np.random.default_rng(0))

        assert result.residual <= ALIGN_RTOL
        assert numerical_rank(result.directions) == 3

    @pytest.mark.parametrize("seed", range(25))
    def test_independence(self, seed):
        """Directions and both preimage sets have rank d."""
        rng = np.random.default_rng(seed)
        p = int(rng.integers(2, 7))
        q1 = int(rng.integers(1, 7))
        q2 = int(rng.integers(1, 7))
        d = shared_dim(p, q1, q2)
        if d == 0:
            pytest.skip("no shared dimension")
        h1, h2 = random_pair(seed + 100, p, q1, q2)
        result = shared_subspace(h1, h2, d, rng)

        assert numerical_rank(result.directions) == d
        assert numerical_rank(result.u) == d
        assert numerical_rank(result.w) == d
        assert np.min(np.linalg.norm(result.directions, axis=0)) > 0

    def test_too_many_directions(self):
        """Asking beyond shared_dim names the formula."""
        h1, h2 = random_pair(0, 4, 3, 2)
        with pytest.raises(AlignmentDimensionError, match="shared_dim"):
            shared_subspace(h1, h2, 2)

    def test_rank_deficient_input(self):
        """A repeated column is a degenerate channel."""
        h1, h2 = random_pair(0, 4, 3, 3)
        h1[:, 2] = h1[:, 1]
        with pytest.raises(DegenerateChannelError):
            shared_subspace(h1, h2, 2)

    def test_zero_request(self):
        """d=0 returns empty blocks."""
        h1, h2 = random_pair(0, 4, 3, 2)
        result = shared_subspace(h1, h2, 0)

        assert result.directions.shape == (4, 0)
        assert result.u.shape == (3, 0)


class TestReceiverFilters:
    """Tests for the downlink dual."""

    def test_two_per_cluster(self):
        """M=3, N=4, d=2: both filters produce the common rows."""
        g1, g2 = random_pair(9, 4, 3, 3)
        g1, g2 = g1.T, g2.T
        result = receiver_filters(g1, g2, 2)

        assert result.residual <= ALIGN_RTOL
        np.testing.assert_allclose(result.filters1 @ g1, result.directions, atol=1e-8)
        np.testing.assert_allclose(result.filters2 @ g2, result.directions, atol=1e-8)

    def test_duality(self):
        """Filter directions span the same rows as the transposed alignment."""
        g1, g2 = random_pair(4, 4, 3, 3)
        g1, g2 = g1.T, g2.T
        filters = receiver_filters(g1, g2, 2)
        aligned = shared_subspace(g1.T, g2.T, 2)

        span = np.vstack([filters.directions, aligned.directions.T])
        assert numerical_rank(span, rtol=1e-8) == 2

    def test_identical_channels(self):
        """Equal downlinks admit equal filters with zero residual."""
        rng = np.random.default_rng(1)
        g = complex_gaussian(rng, (3, 3))
        result = receiver_filters(g, g, 3)

        np.testing.assert_allclose(result.filters1, result.filters2, atol=1e-10)
        assert result.residual < 1e-10

    def test_empty(self):
        """d=0 gives no filters."""
        g1, g2 = random_pair(0, 4, 3, 3)
        result = receiver_filters(g1.T, g2.T, 0)

        assert result.filters1.shape == (0, 3)
        assert result.directions.shape == (0, 4)
