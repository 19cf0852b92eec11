"""Multiway DoF MCP Server - DoF bounds, regime catalog and alignment schemes as tools."""

from mcp.server.fastmcp import FastMCP
from pydantic import ValidationError

from .analyzers.catalog import classify
from .errors import MultiwayDofError
from .generators.scheme import build_scheme_resampling
from .generators.simulation import verify_scheme, verify_sweep_cell
from .models import DoFReport, NetworkConfig
from .parsers.config import expand_sweep, load_sweep_spec
from .utils.formatting import format_rational

# Initialize FastMCP server
mcp = FastMCP(
    "Multiway DoF",
    dependencies=[
        "numpy>=1.26.0",
        "pandas>=2.0.0",
        "pydantic>=2.0.0",
        "scipy>=1.11.0",
    ],
)


def _report_dict(report: DoFReport) -> dict:
    return {
        "upper_bound": format_rational(report.upper_bound),
        "achievable": format_rational(report.achievable),
        "regime": report.regime,
        "optimal": report.optimal.value,
        "canonical_clusters": [list(c) for c in report.config.clusters],
        "strategy": report.strategy.summary() if report.strategy else None,
        "notes": list(report.notes),
    }


@mcp.tool()
def compute_dof(clusters: list[list[int]], relay_antennas: int) -> dict:
    """
    Classify a network and report its DoF upper bound and achievable value.

    Args:
        clusters: Antenna counts per user, one list per cluster (e.g. [[3, 2], [2, 2]])
        relay_antennas: Number of relay antennas N

    Returns:
        Dictionary containing bound, achievable DoF, regime label and optimality
    """
    try:
        report = classify(NetworkConfig(clusters=clusters, relay_antennas=relay_antennas))
    except (MultiwayDofError, ValidationError) as e:
        return {"error": str(e)}

    result = _report_dict(report)
    result["message"] = (
        f"bound {result['upper_bound']}, achievable {result['achievable']}, "
        f"regime {report.regime}"
    )
    return result


@mcp.tool()
def plan_scheme(
    clusters: list[list[int]],
    relay_antennas: int,
    seed: int = 0,
    verify: bool = True,
) -> dict:
    """
    Build the regime's transmission scheme on sampled channels.

    Args:
        clusters: Antenna counts per user, one list per cluster
        relay_antennas: Number of relay antennas N
        seed: Channel seed (default: 0)
        verify: Run a noiseless round trip on the built scheme (default: True)

    Returns:
        Dictionary containing the strategy, conditioning and verification verdict
    """
    try:
        report = classify(NetworkConfig(clusters=clusters, relay_antennas=relay_antennas))
        if report.strategy is None:
            return {"error": f"no constructive scheme in catalog for regime {report.regime}"}
        scheme, _ = build_scheme_resampling(report.config, report.strategy, seed)
        verification = verify_scheme(scheme, seed=seed) if verify else None
    except (MultiwayDofError, ValidationError) as e:
        return {"error": str(e)}

    result = _report_dict(report)
    result.update({
        "channel_seed": scheme.seed,
        "streams": len(scheme.streams),
        "stream_dof": format_rational(scheme.stream_dof),
        "alignment_residual": scheme.alignment_residual,
        "decode_condition": scheme.decode_condition,
        "precode_condition": scheme.precode_condition,
    })
    if verification is not None:
        result["max_residual"] = verification.max_residual
        result["verified"] = verification.passed
    result["message"] = (
        f"Built {len(scheme.streams)} streams for regime {report.regime}"
        + (", noiseless round trip passed" if verification is not None else "")
    )
    return result


@mcp.tool()
def run_sweep(file_path: str) -> dict:
    """
    Classify every configuration of a sweep file.

    Args:
        file_path: Path to the sweep specification JSON file

    Returns:
        Dictionary containing one row per grid cell and a regime count
    """
    try:
        spec = load_sweep_spec(file_path)
        rows = []
        for env, config in expand_sweep(spec):
            report = classify(config)
            row = {**env, **_report_dict(report)}
            if spec.verify:
                row["verified"], row["slope"] = verify_sweep_cell(report, spec)
            rows.append(row)
    except (MultiwayDofError, ValidationError, FileNotFoundError) as e:
        return {"error": str(e)}

    regimes: dict[str, int] = {}
    for row in rows:
        regimes[row["regime"]] = regimes.get(row["regime"], 0) + 1
    optimal = sum(1 for row in rows if row["optimal"] == "optimal")
    return {
        "rows": rows,
        "regimes": regimes,
        "message": f"Classified {len(rows)} configurations, {optimal} optimal",
    }


def main():
    """Entry point for the MCP server."""
    mcp.run()


if __name__ == "__main__":
    main()
