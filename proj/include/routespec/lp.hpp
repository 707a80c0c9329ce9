#pragma once

#include <span>
#include <string>
#include <vector>

#include "routespec/matrix.hpp"
#include "routespec/network.hpp"

namespace routespec {

/// Longest-path linear program: maximize t.x subject to flow conservation.
struct LpModel {
    std::vector<std::string> variable_names;    // x1..xn, activity order
    std::vector<double> objective;              // durations
    Matrix constraints;                         // ungrounded incidence matrix
    std::vector<double> rhs;                    // +1 at start, -1 at finish, 0 else
    std::vector<std::string> constraint_names;  // c1..cm, node order
};

/// Builds the longest-path LP. The right-hand side has exactly one +1 (start
/// node) and one -1 (finish node); that sign convention is the one consistent
/// with the +1 source / -1 sink incidence entries, giving a feasible region
/// whose vertices are the simple paths.
LpModel lp_model(const ProjectNetwork& net, std::span<const double> t);

/// Deterministic LP-format text (Maximize / Subject To / Bounds / End) with
/// coefficients printed to 12 significant digits.
std::string export_lp(const ProjectNetwork& net, std::span<const double> t);

}  // namespace routespec
