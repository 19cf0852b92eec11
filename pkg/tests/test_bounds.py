"""Tests for DoF upper bounds and the genie schedule."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from multiway_dof.analyzers.bounds import (
    cluster_cut_bound,
    cutset_cluster_bounds,
    dof_upper_bound,
    genie_schedule,
)
from multiway_dof.errors import ConfigValidationError
from multiway_dof.models import NetworkConfig
from multiway_dof.network import canonicalize

clusters_strategy = st.lists(
    st.lists(st.integers(1, 8), min_size=2, max_size=4), min_size=1, max_size=3
)


def canonical(clusters, relay):
    config, _ = canonicalize(NetworkConfig(clusters=clusters, relay_antennas=relay), catalog=False)
    return config


class TestUpperBound:
    """Tests for the three-term bound."""

    def test_two_by_two_example(self):
        """[[3,2],[2,2]], N=3 gives terms (9, 8, 6)."""
        b = dof_upper_bound(canonical([[3, 2], [2, 2]], 3))

        assert (b.term_sum_all, b.term_weak_users, b.term_relay) == (9, 8, 6)
        assert b.bound == 6

    def test_y_channel(self):
        """Three users with 4 antennas and N=3 give the Y-channel value 6."""
        assert dof_upper_bound(canonical([[4, 4, 4]], 3)).bound == 6

    def test_pairwise_two_way(self):
        """Three two-user clusters with 2 antennas each and N=3 give 2Kd = 6."""
        b = dof_upper_bound(canonical([[2, 2], [2, 2], [2, 2]], 3))
        assert (b.term_sum_all, b.term_weak_users, b.term_relay, b.bound) == (12, 12, 6, 6)

    @given(st.integers(1, 10), st.integers(1, 10), st.integers(1, 10))
    def test_two_way_reduces_to_cutset(self, m1, m2, relay):
        """For one pair the bound is min{M1+M2, 2 min(M1,M2), 2N}."""
        b = dof_upper_bound(canonical([[m1, m2]], relay))
        assert b.bound == min(m1 + m2, 2 * min(m1, m2), 2 * relay)

    @given(clusters_strategy, st.integers(1, 16))
    def test_scaling(self, clusters, relay):
        """Doubling every antenna count doubles the bound."""
        base = dof_upper_bound(canonical(clusters, relay))
        doubled = dof_upper_bound(canonical([[2 * m for m in c] for c in clusters], 2 * relay))

        assert doubled.bound == 2 * base.bound
        assert doubled.term_weak_users == 2 * base.term_weak_users

    @given(clusters_strategy, st.integers(1, 16), st.data())
    def test_monotone(self, clusters, relay, data):
        """Adding an antenna anywhere never lowers the bound."""
        base = dof_upper_bound(canonical(clusters, relay)).bound
        assert dof_upper_bound(canonical(clusters, relay + 1)).bound >= base

        l = data.draw(st.integers(0, len(clusters) - 1))
        k = data.draw(st.integers(0, len(clusters[l]) - 1))
        grown = [list(c) for c in clusters]
        grown[l][k] += 1
        assert dof_upper_bound(canonical(grown, relay)).bound >= base

    @given(clusters_strategy, st.integers(1, 16))
    def test_cluster_cut_never_looser(self, clusters, relay):
        """The per-cluster cut is at most the summed terms."""
        config = canonical(clusters, relay)
        b = dof_upper_bound(config)

        assert b.cluster_cut == cluster_cut_bound(config)
        assert b.cluster_cut <= min(b.term_sum_all, b.term_weak_users)
        assert b.tightest <= b.bound

    def test_cluster_cut_tightens_mixed_clusters(self):
        """One strong-user cluster and one balanced cluster: the cut beats both sums."""
        b = dof_upper_bound(canonical([[10, 1, 1], [2, 2, 2]], 100))

        assert b.bound == min(18, 12, 200)
        assert b.cluster_cut == 4 + 6
        assert b.tightest == 10


class TestCutsetClusterBounds:
    """Tests for per-user cut-set caps."""

    def test_three_users(self):
        """Cluster (4,3,3), N=10 gives caps 4, 3, 3."""
        config = canonical([[4, 3, 3]], 10)
        assert cutset_cluster_bounds(config, 1) == [(1, 4), (2, 3), (3, 3)]

    def test_relay_bottleneck(self):
        """Cluster (5,1), N=1 gives caps 1, 1."""
        assert cutset_cluster_bounds(canonical([[5, 1]], 1), 1) == [(1, 1), (2, 1)]

    def test_matches_weak_term(self):
        """Cluster (2,2), N=10 sums to 2 * weak antennas."""
        caps = cutset_cluster_bounds(canonical([[2, 2]], 10), 1)

        assert caps == [(1, 2), (2, 2)]
        assert sum(cap for _, cap in caps) == 4

    def test_second_cluster(self):
        """Cluster labels are 1-based."""
        config = canonical([[4, 3, 3], [2, 1, 1]], 10)
        assert cutset_cluster_bounds(config, 2) == [(1, 2), (2, 1), (3, 1)]


class TestGenieSchedule:
    """Tests for the decodable-set enumeration."""

    def test_two_users(self):
        """K=2: one step, user 1 decodes user 2's message."""
        schedule = genie_schedule(2)

        assert schedule.decodable == ((1, 2),)
        assert len(schedule.steps) == 1
        assert schedule.steps[0].genie == ((2, 1),)

    def test_three_users(self):
        """K=3 decodes {(1,2), (1,3), (2,3)}."""
        assert set(genie_schedule(3).decodable) == {(1, 2), (1, 3), (2, 3)}

    def test_nine_users(self):
        """K=9 decodes half of the 72 ordered pairs."""
        assert len(genie_schedule(9).decodable) == 36

    @pytest.mark.parametrize("num_users", range(2, 13))
    def test_partition(self, num_users):
        """The decodable set and its mirror partition all ordered pairs."""
        schedule = genie_schedule(num_users)
        decodable = set(schedule.decodable)
        mirror = set(schedule.mirror)
        universe = {
            (k, i) for k, i in itertools.product(range(1, num_users + 1), repeat=2) if k != i
        }

        assert decodable.isdisjoint(mirror)
        assert decodable | mirror == universe
        assert len(decodable) == num_users * (num_users - 1) // 2

    def test_needs_two_users(self):
        """K < 2 is rejected."""
        with pytest.raises(ConfigValidationError):
            genie_schedule(1)
