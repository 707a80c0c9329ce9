#include "routespec/paths.hpp"

#include <algorithm>

#include "routespec/errors.hpp"

namespace routespec {

std::uint64_t count_paths(const ProjectNetwork& net) {
    net.require_valid();
    const auto order = topological_order(net);
    const std::size_t n = net.nodes().size();

    std::vector<std::uint64_t> ways(n, 0);
    ways[net.start_node()] = 1;
    for (const auto& id : order) {
        std::size_t v = net.node_index(id);
        if (ways[v] == 0) continue;
        for (std::size_t a : net.outgoing()[v]) {
            std::size_t w = net.activity_sink(a);
            if (__builtin_add_overflow(ways[w], ways[v], &ways[w]))
                throw NumericalError("path count exceeds the 64-bit range");
        }
    }
    return ways[net.finish_node()];
}

RouteMatrix enumerate_paths(const ProjectNetwork& net, std::uint64_t max_paths) {
    net.require_valid();
    const std::uint64_t count = count_paths(net);
    if (count > max_paths) throw BudgetError(count, max_paths);

    const std::size_t start = net.start_node();
    const std::size_t finish = net.finish_node();

    // Per-node successor lists in canonical expansion order: reversed at the
    // start node, declaration order elsewhere.
    std::vector<std::vector<std::size_t>> succ = net.outgoing();
    std::reverse(succ[start].begin(), succ[start].end());

    RouteMatrix rm;
    for (const auto& a : net.activities()) rm.activity_ids.push_back(a.id);
    rm.matrix = Matrix(static_cast<std::size_t>(count), net.activities().size());

    // Iterative depth-first walk; a DAG makes every walk simple, so no
    // visited bookkeeping is needed.
    std::vector<std::pair<std::size_t, std::size_t>> stack;  // (node, next successor)
    std::vector<std::size_t> trail;                          // activity indices
    stack.emplace_back(start, 0);
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (node == finish) {
            SimplePath p;
            p.index = rm.paths.size();
            p.activities = trail;
            for (std::size_t a : trail) rm.matrix(p.index, a) = 1.0;
            rm.paths.push_back(std::move(p));
            stack.pop_back();
            if (!trail.empty()) trail.pop_back();
            continue;
        }
        if (next < succ[node].size()) {
            std::size_t a = succ[node][next];
            ++next;
            trail.push_back(a);
            stack.emplace_back(net.activity_sink(a), 0);
        } else {
            stack.pop_back();
            if (!trail.empty()) trail.pop_back();
        }
    }
    return rm;
}

std::string route_matrix_csv(const RouteMatrix& rm) {
    std::string out;
    for (std::size_t j = 0; j < rm.activity_ids.size(); ++j) {
        if (j) out += ",";
        out += rm.activity_ids[j];
    }
    out += "\n";
    for (std::size_t i = 0; i < rm.matrix.rows(); ++i) {
        for (std::size_t j = 0; j < rm.matrix.cols(); ++j) {
            if (j) out += ",";
            out += rm.matrix(i, j) != 0.0 ? "1" : "0";
        }
        out += "\n";
    }
    return out;
}

}  // namespace routespec
