"""Tests for MCP server tools."""

from pathlib import Path

from multiway_dof.server import compute_dof, plan_scheme, run_sweep

FIXTURES = Path(__file__).parent / "fixtures"


class TestComputeDof:
    """Tests for the compute_dof tool."""

    def test_optimal(self):
        """[[3,2],[2,2]], N=3 reports 6 as optimal."""
        result = compute_dof([[3, 2], [2, 2]], 3)

        assert "error" not in result
        assert result["upper_bound"] == "6"
        assert result["achievable"] == "6"
        assert result["regime"] == "P1.i.C2.cond3.1"
        assert result["optimal"] == "optimal"
        assert "message" in result

    def test_fraction(self):
        """Thirds-valued results are exact strings."""
        result = compute_dof([[3, 3], [2, 2]], 4)

        assert result["achievable"] == "20/3"
        assert result["optimal"] == "unknown"
        assert result["notes"]

    def test_canonical_clusters(self):
        """The canonical ordering is returned alongside the result."""
        result = compute_dof([[2, 2], [2, 3]], 3)
        assert result["canonical_clusters"] == [[3, 2], [2, 2]]

    def test_invalid_network(self):
        """Zero antennas come back as an error dict."""
        result = compute_dof([[3, 0], [2, 2]], 3)
        assert "error" in result


class TestPlanScheme:
    """Tests for the plan_scheme tool."""

    def test_verified_plan(self):
        """Symmetric M=3, N=4 builds eight streams and verifies."""
        result = plan_scheme([[3, 3], [3, 3]], 4)

        assert result["streams"] == 8
        assert result["verified"] is True
        assert result["max_residual"] < 1e-6

    def test_without_verification(self):
        """verify=False skips the round trip."""
        result = plan_scheme([[3, 2], [2, 2]], 3, seed=2, verify=False)

        assert "verified" not in result
        assert result["channel_seed"] == 2

    def test_unknown_regime(self):
        """Regimes without an allocation return an error."""
        result = plan_scheme([[3, 3, 3], [3, 3, 3]], 6)
        assert "no constructive scheme" in result["error"]


class TestRunSweep:
    """Tests for the run_sweep tool."""

    def test_y_channel(self):
        """Four cells, all in the SSA regime."""
        result = run_sweep(str(FIXTURES / "y_channel_sweep.json"))

        assert len(result["rows"]) == 4
        assert result["regimes"] == {"T4.ssa": 4}
        assert result["rows"][0]["N"] == 3

    def test_verified_rows(self):
        """verify=true adds a verdict and a median slope to every row."""
        result = run_sweep(str(FIXTURES / "verify_sweep.json"))

        assert [row["verified"] for row in result["rows"]] == ["PASS", "PASS"]
        assert all(6.5 <= row["slope"] <= 9.5 for row in result["rows"])

    def test_missing_file(self):
        """A missing sweep file returns an error."""
        result = run_sweep("/nonexistent/sweep.json")
        assert "error" in result

    def test_oversize(self):
        """Oversized grids are refused."""
        result = run_sweep(str(FIXTURES / "oversize_sweep.json"))
        assert "limit" in result["error"]
