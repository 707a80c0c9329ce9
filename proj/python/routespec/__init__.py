"""Project network analysis through the route matrix.

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports it and adds a dict-returning :func:`analyze` convenience wrapper.
"""

import json as _json

from ._core import (
    Activity,
    BudgetError,
    Error,
    LeastSquaresDurations,
    NullspaceBasis,
    NumericalError,
    ParseError,
    ProjectNetwork,
    Reachability,
    RelevanceReport,
    RouteMatrix,
    ScheduleReport,
    ShiftResult,
    SpectralExpansion,
    SvdDecomposition,
    TerminalSurgery,
    add_virtual_terminals,
    analyze_report,
    apply_duration_shift,
    completion_time,
    count_paths,
    critical_paths,
    enumerate_paths,
    export_lp,
    forward_pass,
    least_squares_durations,
    minimal_spectral_order,
    nullspace_basis,
    parse_project,
    path_durations,
    project_stress,
    pseudoinverse,
    reachability,
    relevance,
    schedule_report,
    serialize_project,
    spectral_networks,
    svd,
    threshold_reconstruct,
    total_float,
)

__version__ = "0.1.0"

__all__ = [
    "Activity",
    "BudgetError",
    "Error",
    "LeastSquaresDurations",
    "NullspaceBasis",
    "NumericalError",
    "ParseError",
    "ProjectNetwork",
    "Reachability",
    "RelevanceReport",
    "RouteMatrix",
    "ScheduleReport",
    "ShiftResult",
    "SpectralExpansion",
    "SvdDecomposition",
    "TerminalSurgery",
    "add_virtual_terminals",
    "analyze",
    "analyze_report",
    "apply_duration_shift",
    "completion_time",
    "count_paths",
    "critical_paths",
    "enumerate_paths",
    "export_lp",
    "forward_pass",
    "least_squares_durations",
    "minimal_spectral_order",
    "nullspace_basis",
    "parse_project",
    "path_durations",
    "project_stress",
    "pseudoinverse",
    "reachability",
    "relevance",
    "schedule_report",
    "serialize_project",
    "spectral_networks",
    "svd",
    "threshold_reconstruct",
    "total_float",
]


def analyze(network, target_tau=None, spectral_threshold=0.5, max_paths=100000,
            score_tol=1e-6):
    """Run the full pipeline and return the report as a plain dict.

    The structure matches the CLI's ``analyze`` JSON output exactly.
    """
    return _json.loads(
        analyze_report(
            network,
            target_tau=target_tau,
            spectral_threshold=spectral_threshold,
            max_paths=max_paths,
            score_tol=score_tol,
        )
    )
