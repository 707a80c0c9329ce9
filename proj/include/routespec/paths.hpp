#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "routespec/matrix.hpp"
#include "routespec/network.hpp"

namespace routespec {

/// Default enumeration budget; converts exponential blowup into a typed error.
inline constexpr std::uint64_t kDefaultMaxPaths = 100000;

/// One simple start-to-finish path as a chain of activity indices.
struct SimplePath {
    std::size_t index = 0;                 // row position
    std::vector<std::size_t> activities;   // declaration indices, start to finish

    friend bool operator==(const SimplePath&, const SimplePath&) = default;
};

/// All simple paths plus the 0/1 route matrix (paths x activities).
struct RouteMatrix {
    std::vector<std::string> activity_ids;  // column labels, declaration order
    std::vector<SimplePath> paths;
    Matrix matrix;

    friend bool operator==(const RouteMatrix&, const RouteMatrix&) = default;
};

/// Exact number of simple start-to-finish paths, by dynamic programming over
/// the topological order (no enumeration). Throws NumericalError if the count
/// exceeds the 64-bit range and ParseError on invalid networks.
std::uint64_t count_paths(const ProjectNetwork& net);

/**
 * Enumerates every simple start-to-finish path and builds the route matrix.
 *
 * Canonical row order: depth-first traversal in which the start node's
 * outgoing activities are expanded in reverse declaration order and every
 * other node's in declaration order. The order is deterministic and is the
 * one all reports and serializations use.
 *
 * Throws BudgetError (with count and budget) when count_paths exceeds
 * max_paths, and ParseError on invalid networks.
 */
RouteMatrix enumerate_paths(const ProjectNetwork& net,
                            std::uint64_t max_paths = kDefaultMaxPaths);

/// CSV form: header of activity ids, one 0/1 row per path.
std::string route_matrix_csv(const RouteMatrix& rm);

}  // namespace routespec
