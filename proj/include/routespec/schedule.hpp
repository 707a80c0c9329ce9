#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "routespec/network.hpp"
#include "routespec/paths.hpp"

namespace routespec {

/// Per-path durations: the product R*t. Throws ParseError on length mismatch.
std::vector<double> path_durations(const RouteMatrix& rm, std::span<const double> t);

/// Project completion time: the largest entry of R*t. Requires t >= 0
/// elementwise (so the max equals the infinity norm); throws ParseError
/// otherwise or on length mismatch.
double completion_time(const RouteMatrix& rm, std::span<const double> t);

/// Node early times plus derived schedule data. forward_pass fills
/// completion_time and early_times only; schedule_report fills everything.
struct ScheduleReport {
    double completion_time = 0.0;
    std::vector<double> early_times;                 // node declaration order
    std::vector<std::size_t> critical_path_indices;  // ascending row indices
    std::vector<double> total_float;                 // activity declaration order
};

/// Classical forward pass: early time 0 at the start node, then
/// e[sink] = max(e[sink], e[source] + duration) in topological order.
/// Runs in O(nodes + activities); independent of the route matrix.
ScheduleReport forward_pass(const ProjectNetwork& net, std::span<const double> t);

/// Rows within tie_tol of the maximum path duration; never empty.
/// tie_tol defaults to 1e-9 * max(1, completion time).
std::vector<std::size_t> critical_paths(const RouteMatrix& rm, std::span<const double> t,
                                        std::optional<double> tie_tol = std::nullopt);

/// Path float per activity: completion time minus the longest path duration
/// among paths containing the activity. Zero exactly on activities lying on a
/// critical path. Throws ParseError if an activity lies on no path.
std::vector<double> total_float(const RouteMatrix& rm, std::span<const double> t);

/// Forward pass plus critical rows and floats in one report.
ScheduleReport schedule_report(const ProjectNetwork& net, const RouteMatrix& rm,
                               std::span<const double> t,
                               std::optional<double> tie_tol = std::nullopt);

/// Project stress: |R*t|_p / |R*t_max|_p for p >= 1 or infinity. Requires
/// 0 <= t <= t_max elementwise and a nonzero denominator; always in [0, 1].
double project_stress(const RouteMatrix& rm, std::span<const double> t,
                      std::span<const double> t_max, double p);

/// Result of shifting durations by a delta vector.
struct ShiftResult {
    std::vector<double> durations;  // t + delta
    bool same_tau = false;          // true iff R*delta vanishes numerically
};

/// Applies t + delta and reports whether every path duration is preserved,
/// i.e. whether delta lies in the nullspace of R within
/// 1e-9 * max(1, completion time of t). Throws ParseError if any shifted
/// duration is negative.
ShiftResult apply_duration_shift(std::span<const double> t, std::span<const double> delta,
                                 const RouteMatrix& rm);

}  // namespace routespec
