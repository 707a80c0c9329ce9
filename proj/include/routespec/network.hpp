#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "routespec/matrix.hpp"

namespace routespec {

/// One arrow of an activities-on-arrows network.
struct Activity {
    std::string id;
    std::string source;
    std::string sink;
    double duration = 0.0;
    std::optional<double> max_duration;

    friend bool operator==(const Activity&, const Activity&) = default;
};

enum class ProjectFormat { json, edge_csv };

/**
 * Activities-on-arrows project network.
 *
 * Construction is permissive: any graph with well-formed ids can be built so
 * that validate() can report violations as data. Analysis entry points call
 * require_valid() and reject networks that are not a DAG with a unique start
 * node (in-degree 0), a unique finish node (out-degree 0), and every node on
 * some start-to-finish path. Node and activity order is declaration order and
 * is canonical everywhere (matrix columns, report rows).
 *
 * Immutable after construction; safe for concurrent reads.
 */
class ProjectNetwork {
public:
    /// Builds the network. Nodes referenced by activities but absent from
    /// `nodes` are appended in first-use order. Throws ParseError on duplicate
    /// node or activity ids (index maps would be ambiguous otherwise).
    ProjectNetwork(std::vector<std::string> nodes, std::vector<Activity> activities);

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    const std::vector<Activity>& activities() const noexcept { return activities_; }

    /// Index of a node id; throws ParseError if unknown.
    std::size_t node_index(const std::string& id) const;

    /// Node indices of an activity's endpoints.
    std::size_t activity_source(std::size_t a) const { return sources_[a]; }
    std::size_t activity_sink(std::size_t a) const { return sinks_[a]; }

    /// Outgoing/incoming activity indices per node, in declaration order.
    const std::vector<std::vector<std::size_t>>& outgoing() const noexcept {
        return outgoing_;
    }
    const std::vector<std::vector<std::size_t>>& incoming() const noexcept {
        return incoming_;
    }

    /// Lists every violated invariant; empty iff the network is analysis-ready.
    std::vector<std::string> validate() const;

    /// Throws ParseError listing all violations unless validate() is empty.
    void require_valid() const;

    /// Unique in-degree-0 node; throws ParseError if absent or ambiguous.
    std::size_t start_node() const;
    /// Unique out-degree-0 node; throws ParseError if absent or ambiguous.
    std::size_t finish_node() const;

    /// Durations in activity declaration order.
    std::vector<double> durations() const;
    /// Max durations in declaration order; throws ParseError if any is absent.
    std::vector<double> max_durations() const;
    bool has_max_durations() const noexcept;

    friend bool operator==(const ProjectNetwork& a, const ProjectNetwork& b) {
        return a.nodes_ == b.nodes_ && a.activities_ == b.activities_;
    }

private:
    std::vector<std::string> nodes_;
    std::vector<Activity> activities_;
    std::vector<std::size_t> sources_;  // per activity, node index
    std::vector<std::size_t> sinks_;
    std::vector<std::vector<std::size_t>> outgoing_;  // per node
    std::vector<std::vector<std::size_t>> incoming_;
};

/// Parses a project description. JSON: {"nodes":[...], "activities":[{"id",
/// "source","sink","duration","max_duration"?}]}; when "nodes" is present
/// every endpoint must be declared, when absent nodes are collected from
/// endpoints in first-mention order. Edge CSV: header
/// `id,source,sink,duration[,max_duration]`, '.' decimal separator, no quoting.
/// Throws ParseError on syntax errors (position reported) and on networks
/// violating any invariant.
ProjectNetwork parse_project(const std::string& text, ProjectFormat format);

/// As parse_project but skips the final validity check, so callers can
/// inspect violations or repair the graph (see add_virtual_terminals).
ProjectNetwork parse_project_raw(const std::string& text, ProjectFormat format);

/// Serializes a network so that parse_project(serialize_project(n)) == n.
std::string serialize_project(const ProjectNetwork& net, ProjectFormat format);

/// Result of terminal surgery; the added ids are reported so the repair is
/// never silent.
struct TerminalSurgery {
    ProjectNetwork network;
    std::vector<std::string> added_nodes;
    std::vector<std::string> added_activities;
};

/// Repairs a multi-source and/or multi-sink graph by splicing in a virtual
/// start and/or finish node connected with zero-duration activities. Networks
/// already having unique terminals are returned unchanged.
TerminalSurgery add_virtual_terminals(const ProjectNetwork& net);

/// Topological order of node ids; deterministic (ties broken by node-id
/// lexicographic order). Throws ParseError naming one cycle when cyclic.
std::vector<std::string> topological_order(const ProjectNetwork& net);

/// Node x activity incidence matrix with node order metadata.
struct IncidenceMatrix {
    Matrix matrix;                        // entries in {-1, 0, +1}
    std::vector<std::string> node_order;  // row labels
    bool grounded = false;                // start-node row removed
};

/// Incidence matrix: +1 at an activity's source row, -1 at its sink row.
/// Grounding removes the start-node row, giving full row rank.
IncidenceMatrix incidence_matrix(const ProjectNetwork& net, bool grounded);

}  // namespace routespec
