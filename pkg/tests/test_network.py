"""Tests for configuration handling, canonical ordering and channel sampling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multiway_dof.errors import ConfigValidationError
from multiway_dof.models import MessageId, NetworkConfig
from multiway_dof.network import (
    canonicalize,
    message_universe,
    sample_channels,
    validate_config,
)
from multiway_dof.utils.linalg import numerical_rank


def make_config(clusters, relay):
    return NetworkConfig(clusters=clusters, relay_antennas=relay)


class TestValidation:
    """Tests for structural validation."""

    def test_zero_antennas_rejected(self):
        """A user without antennas names the offending field."""
        with pytest.raises(ConfigValidationError) as exc:
            validate_config(make_config([[3, 0], [2, 2]], 3))
        assert exc.value.field == "clusters[1][2]"

    def test_single_user_cluster_rejected(self):
        """A cluster needs at least two users."""
        with pytest.raises(ConfigValidationError):
            validate_config(make_config([[3]], 3))

    def test_empty_network_rejected(self):
        """At least one cluster is required."""
        with pytest.raises(ConfigValidationError):
            validate_config(make_config([], 3))

    def test_zero_relay_rejected(self):
        """The relay needs at least one antenna."""
        with pytest.raises(ConfigValidationError) as exc:
            validate_config(make_config([[2, 2]], 0))
        assert exc.value.field == "relay_antennas"


class TestCanonicalize:
    """Tests for canonical user and cluster ordering."""

    def test_sorts_users_within_cluster(self):
        """Users are sorted by antenna count and the swap is recorded."""
        canonical, record = canonicalize(make_config([[2, 3], [2, 2]], 3))

        assert canonical.clusters == ((3, 2), (2, 2))
        assert record.user_orders[0] == (2, 1)
        assert not record.is_identity

    def test_catalog_mode_swaps_clusters(self):
        """The cluster with the larger second user comes first."""
        canonical, record = canonicalize(make_config([[2, 2], [3, 2]], 3), catalog=True)

        assert canonical.clusters == ((3, 2), (2, 2))
        assert record.cluster_order == (2, 1)
        assert record.tie_broken

    def test_already_canonical_is_identity(self):
        """A canonical config comes back unchanged, flagged when M_1 broke an M_2 tie."""
        config = make_config([[3, 2], [2, 2]], 3)
        canonical, record = canonicalize(config)

        assert canonical == config
        assert record.is_identity
        assert record.tie_broken

    def test_distinct_second_users_not_tie_broken(self):
        """Different M_2 values order the clusters without a tie-break."""
        config = make_config([[3, 3], [2, 2]], 3)
        canonical, record = canonicalize(config)

        assert canonical == config
        assert record.is_identity
        assert not record.tie_broken

    def test_second_user_decides_cluster_order(self):
        """M_2 dominates the M_1 tie-break."""
        canonical, _ = canonicalize(make_config([[6, 1], [2, 2]], 4))
        assert canonical.clusters == ((2, 2), (6, 1))

    def test_catalog_mode_needs_two_by_two(self):
        """Catalog ordering is only defined for 2x2 networks."""
        with pytest.raises(ConfigValidationError):
            canonicalize(make_config([[3, 2, 1], [2, 2, 2]], 3), catalog=True)

    @given(
        st.lists(st.lists(st.integers(1, 6), min_size=2, max_size=2), min_size=2, max_size=2),
        st.integers(1, 12),
    )
    def test_idempotent(self, clusters, relay):
        """Canonicalizing twice changes nothing."""
        once, _ = canonicalize(make_config(clusters, relay))
        twice, record = canonicalize(once)

        assert twice == once
        assert record.is_identity

    def test_to_original_maps_labels_back(self):
        """Canonical message labels map to the raw configuration's labels."""
        _, record = canonicalize(make_config([[2, 2], [2, 3]], 3), catalog=True)
        # canonical cluster 1 is raw cluster 2 with its users swapped
        message = MessageId(cluster=1, dest=1, src=2)
        assert record.to_original(message) == MessageId(cluster=2, dest=2, src=1)


class TestMessageUniverse:
    """Tests for message enumeration."""

    def test_single_pair(self):
        """Two users exchange two messages."""
        messages = message_universe(make_config([[2, 2]], 2))
        assert [m.label() for m in messages] == [
            MessageId(cluster=1, dest=1, src=2).label(),
            MessageId(cluster=1, dest=2, src=1).label(),
        ]

    @pytest.mark.parametrize(
        "clusters, expected",
        [([[2, 2], [2, 2]], 4), ([[3, 3, 3]], 6), ([[2, 2, 2], [1, 1]], 8)],
    )
    def test_size(self, clusters, expected):
        """Count is sum over clusters of K(K-1)."""
        assert len(message_universe(make_config(clusters, 3))) == expected

    def test_self_message_rejected(self):
        """A user cannot send to itself."""
        with pytest.raises(ValueError):
            MessageId(cluster=1, dest=2, src=2)


class TestSampleChannels:
    """Tests for channel sampling."""

    def test_deterministic(self):
        """The same seed gives bit-identical channels."""
        config = make_config([[3, 2], [2, 2]], 3)
        first = sample_channels(config, 7)
        second = sample_channels(config, 7)

        for user in config.users():
            np.testing.assert_array_equal(first.uplink[user], second.uplink[user])
            np.testing.assert_array_equal(first.downlink[user], second.downlink[user])

    def test_shapes(self):
        """Uplink is N x M and downlink M x N."""
        channels = sample_channels(make_config([[3, 2], [2, 2]], 3), 0)

        assert channels.uplink[(1, 2)].shape == (3, 2)
        assert channels.downlink[(1, 2)].shape == (2, 3)

    def test_full_rank(self):
        """Every sampled matrix is numerically full rank."""
        config = make_config([[4, 3], [2, 1]], 3)
        for seed in range(200):
            channels = sample_channels(config, seed)
            for h in [*channels.uplink.values(), *channels.downlink.values()]:
                assert numerical_rank(h) == min(h.shape)

    @settings(max_examples=20)
    @given(st.integers(0, 2**31))
    def test_unit_variance(self, seed):
        """Entries are zero-mean with unit average power."""
        channels = sample_channels(make_config([[40, 40]], 40), seed)
        h = channels.uplink[(1, 1)]

        assert abs(np.mean(np.abs(h) ** 2) - 1.0) < 0.15
        assert abs(np.mean(h)) < 0.1
