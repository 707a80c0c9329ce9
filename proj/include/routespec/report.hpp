#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "routespec/lp.hpp"
#include "routespec/network.hpp"
#include "routespec/nullspace.hpp"
#include "routespec/paths.hpp"
#include "routespec/schedule.hpp"
#include "routespec/svd.hpp"

namespace routespec {

/// Knobs shared by analyze() and the CLI. Defaults match the documented
/// library defaults.
struct AnalysisOptions {
    std::uint64_t max_paths = kDefaultMaxPaths;
    std::optional<double> rank_tol;             // SVD truncation override
    std::optional<double> tie_tol;              // critical-path tie override
    double score_tol = 1e-6;                    // relevance top-set width
    double spectral_threshold = 0.5;            // reconstruction cut
    std::optional<std::vector<double>> target_tau;  // least-squares target
};

/// Stress at the three standard norm orders.
struct StressSummary {
    double p1 = 0.0;
    double p2 = 0.0;
    double pinf = 0.0;
};

/// Least-squares solution for a requested target path-duration vector.
struct TargetSolution {
    std::vector<double> tau;
    LeastSquaresDurations durations;
    Reachability reach;
};

/// Everything the analyze command reports. Every numeric field is a pure
/// function of the input network and options (no hidden state, no
/// timestamps), so reports are reproducible byte for byte.
struct AnalysisReport {
    ProjectNetwork network;
    std::vector<std::string> virtual_nodes_added;       // terminal surgery log
    std::vector<std::string> virtual_activities_added;
    RouteMatrix route_matrix;
    std::vector<double> durations;
    std::vector<double> path_durations;
    ScheduleReport schedule;
    std::vector<double> singular_values;
    std::size_t numerical_rank = 0;
    double rank_tol = 0.0;
    RelevanceReport relevance;
    double spectral_threshold = 0.5;
    std::optional<std::size_t> spectral_order;
    NullspaceBasis nullspace;
    std::optional<StressSummary> stress;      // present when max durations exist
    std::optional<TargetSolution> target;     // present when target_tau given
    Reachability reachability;                // of the current path durations
};

/// Runs the full pipeline on a valid network.
AnalysisReport analyze(const ProjectNetwork& net, const AnalysisOptions& options = {});

/// Rounds to 12 significant digits; applied to every real in report JSON so
/// output is compact and deterministic.
double json_real(double v);

nlohmann::ordered_json report_json(const AnalysisReport& report);
std::string report_text(const AnalysisReport& report);

/// CSV of per-activity total float: header `activity,total_float`.
std::string floats_csv(const AnalysisReport& report);

/// Subcommand payloads. SVD, pseudoinverse, and nullspace JSON keep full
/// double precision; analyze-report JSON rounds via json_real.
nlohmann::ordered_json route_matrix_json(const RouteMatrix& rm);
nlohmann::ordered_json svd_json(const SvdDecomposition& dec);
nlohmann::ordered_json nullspace_json(const NullspaceBasis& basis,
                                      const std::vector<std::string>& activity_ids);
std::string nullspace_csv(const NullspaceBasis& basis);
nlohmann::ordered_json pinv_json(const Matrix& pinv);
nlohmann::ordered_json reachability_json(const Reachability& reach);

}  // namespace routespec
