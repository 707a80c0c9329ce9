#include "routespec/network.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "routespec/errors.hpp"

namespace routespec {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_double_strict(std::string_view s, const std::string& where) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(where + ": cannot parse number '" + std::string(s) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(pos)));
            break;
        }
        fields.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return fields;
}

ProjectNetwork parse_json_project(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("JSON syntax error at byte " + std::to_string(e.byte) + ": " +
                         e.what());
    }
    if (!doc.is_object()) throw ParseError("JSON project must be an object");

    std::vector<std::string> nodes;
    bool nodes_declared = doc.contains("nodes");
    if (nodes_declared) {
        if (!doc["nodes"].is_array())
            throw ParseError("JSON project field 'nodes' must be an array of strings");
        for (const auto& n : doc["nodes"]) {
            if (!n.is_string())
                throw ParseError("JSON project field 'nodes' must contain only strings");
            nodes.push_back(n.get<std::string>());
        }
    }
    if (!doc.contains("activities") || !doc["activities"].is_array())
        throw ParseError("JSON project requires an 'activities' array");

    std::unordered_set<std::string> declared(nodes.begin(), nodes.end());
    std::vector<Activity> activities;
    std::size_t at = 0;
    for (const auto& a : doc["activities"]) {
        const std::string where = "activity #" + std::to_string(at++);
        if (!a.is_object()) throw ParseError(where + " must be an object");
        Activity act;
        for (const char* key : {"id", "source", "sink"}) {
            if (!a.contains(key) || !a[key].is_string())
                throw ParseError(where + " requires string field '" + key + "'");
        }
        act.id = a["id"].get<std::string>();
        act.source = a["source"].get<std::string>();
        act.sink = a["sink"].get<std::string>();
        if (!a.contains("duration") || !a["duration"].is_number())
            throw ParseError(where + " requires numeric field 'duration'");
        act.duration = a["duration"].get<double>();
        if (a.contains("max_duration")) {
            if (!a["max_duration"].is_number())
                throw ParseError(where + " field 'max_duration' must be numeric");
            act.max_duration = a["max_duration"].get<double>();
        }
        if (nodes_declared) {
            for (const std::string* ep : {&act.source, &act.sink})
                if (!declared.count(*ep))
                    throw ParseError("activity '" + act.id +
                                     "' references undeclared node '" + *ep + "'");
        }
        activities.push_back(std::move(act));
    }
    return ProjectNetwork(std::move(nodes), std::move(activities));
}

ProjectNetwork parse_csv_project(const std::string& text) {
    std::vector<Activity> activities;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    bool has_max_column = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        const std::string where = "CSV line " + std::to_string(lineno);
        if (!header_seen) {
            if (fields.size() == 5 && fields[4] == "max_duration")
                has_max_column = true;
            else if (fields.size() != 4)
                throw ParseError(where +
                                 ": expected header 'id,source,sink,duration[,max_duration]'");
            if (fields[0] != "id" || fields[1] != "source" || fields[2] != "sink" ||
                fields[3] != "duration" || (fields.size() == 5 && !has_max_column))
                throw ParseError(where +
                                 ": expected header 'id,source,sink,duration[,max_duration]'");
            header_seen = true;
            continue;
        }
        const std::size_t expected = has_max_column ? 5 : 4;
        if (fields.size() != expected)
            throw ParseError(where + ": expected " + std::to_string(expected) +
                             " fields, got " + std::to_string(fields.size()));
        Activity act;
        act.id = std::string(fields[0]);
        act.source = std::string(fields[1]);
        act.sink = std::string(fields[2]);
        act.duration = parse_double_strict(fields[3], where);
        if (has_max_column && !fields[4].empty())
            act.max_duration = parse_double_strict(fields[4], where);
        activities.push_back(std::move(act));
    }
    if (!header_seen) throw ParseError("CSV input is empty");
    return ProjectNetwork({}, std::move(activities));
}

}  // namespace

ProjectNetwork::ProjectNetwork(std::vector<std::string> nodes,
                               std::vector<Activity> activities)
    : nodes_(std::move(nodes)), activities_(std::move(activities)) {
    std::unordered_map<std::string, std::size_t> node_index;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!node_index.emplace(nodes_[i], i).second)
            throw ParseError("duplicate node id '" + nodes_[i] + "'");
    }
    std::unordered_set<std::string> activity_ids;
    for (const auto& a : activities_) {
        if (!activity_ids.insert(a.id).second)
            throw ParseError("duplicate activity id '" + a.id + "'");
        for (const std::string* ep : {&a.source, &a.sink}) {
            if (!node_index.count(*ep)) {
                node_index.emplace(*ep, nodes_.size());
                nodes_.push_back(*ep);
            }
        }
    }
    outgoing_.resize(nodes_.size());
    incoming_.resize(nodes_.size());
    sources_.reserve(activities_.size());
    sinks_.reserve(activities_.size());
    for (std::size_t a = 0; a < activities_.size(); ++a) {
        std::size_t s = node_index[activities_[a].source];
        std::size_t t = node_index[activities_[a].sink];
        sources_.push_back(s);
        sinks_.push_back(t);
        outgoing_[s].push_back(a);
        incoming_[t].push_back(a);
    }
}

std::size_t ProjectNetwork::node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i] == id) return i;
    throw ParseError("unknown node id '" + id + "'");
}

std::vector<std::string> ProjectNetwork::validate() const {
    std::vector<std::string> violations;
    if (activities_.empty()) violations.push_back("network has no activities");
    for (const auto& a : activities_) {
        if (a.duration < 0.0)
            violations.push_back("activity '" + a.id + "' has negative duration");
        if (a.max_duration && *a.max_duration < a.duration)
            violations.push_back("activity '" + a.id +
                                 "' has max_duration less than duration");
        if (a.source == a.sink)
            violations.push_back("activity '" + a.id +
                                 "' has identical source and sink");
    }

    std::vector<std::string> starts, finishes;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (incoming_[i].empty()) starts.push_back(nodes_[i]);
        if (outgoing_[i].empty()) finishes.push_back(nodes_[i]);
    }
    if (starts.empty())
        violations.push_back("no start node (every node has an incoming activity)");
    if (starts.size() > 1)
        violations.push_back("multiple start nodes: " + join(starts, ", "));
    if (finishes.empty())
        violations.push_back("no finish node (every node has an outgoing activity)");
    if (finishes.size() > 1)
        violations.push_back("multiple finish nodes: " + join(finishes, ", "));
    if (starts.size() == 1 && finishes.size() == 1 && starts[0] == finishes[0])
        violations.push_back("start node equals finish node");

    bool acyclic = true;
    try {
        topological_order(*this);
    } catch (const ParseError& e) {
        acyclic = false;
        violations.push_back(e.what());
    }

    // Reachability diagnosis needs provisional terminals: prefer the unique
    // in-degree-0 node with outgoing activities (so an isolated node does not
    // mask the real start), falling back to a unique candidate overall.
    if (acyclic && !nodes_.empty()) {
        auto provisional = [&](const std::vector<std::string>& candidates,
                               bool want_outgoing) -> std::optional<std::size_t> {
            std::vector<std::size_t> working;
            for (const auto& id : candidates) {
                std::size_t i = node_index(id);
                bool has_other = want_outgoing ? !outgoing_[i].empty() : !incoming_[i].empty();
                if (has_other) working.push_back(i);
            }
            if (working.size() == 1) return working[0];
            if (candidates.size() == 1) return node_index(candidates[0]);
            return std::nullopt;
        };
        auto start = provisional(starts, true);
        auto finish = provisional(finishes, false);
        if (start && finish) {
            std::vector<char> fwd(nodes_.size(), 0), bwd(nodes_.size(), 0);
            auto sweep = [&](std::size_t from, std::vector<char>& seen,
                             const std::vector<std::vector<std::size_t>>& edges,
                             const std::vector<std::size_t>& heads) {
                std::vector<std::size_t> stack{from};
                seen[from] = 1;
                while (!stack.empty()) {
                    std::size_t v = stack.back();
                    stack.pop_back();
                    for (std::size_t a : edges[v]) {
                        std::size_t w = heads[a];
                        if (!seen[w]) {
                            seen[w] = 1;
                            stack.push_back(w);
                        }
                    }
                }
            };
            sweep(*start, fwd, outgoing_, sinks_);
            sweep(*finish, bwd, incoming_, sources_);
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                if (!fwd[i])
                    violations.push_back("node '" + nodes_[i] +
                                         "' is unreachable from the start node");
                if (!bwd[i])
                    violations.push_back("node '" + nodes_[i] +
                                         "' cannot reach the finish node");
            }
        }
    }
    return violations;
}

void ProjectNetwork::require_valid() const {
    auto violations = validate();
    if (!violations.empty())
        throw ParseError("invalid network: " + join(violations, "; "));
}

std::size_t ProjectNetwork::start_node() const {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (incoming_[i].empty()) {
            if (found) throw ParseError("multiple start nodes");
            found = i;
        }
    }
    if (!found) throw ParseError("no start node");
    return *found;
}

std::size_t ProjectNetwork::finish_node() const {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (outgoing_[i].empty()) {
            if (found) throw ParseError("multiple finish nodes");
            found = i;
        }
    }
    if (!found) throw ParseError("no finish node");
    return *found;
}

std::vector<double> ProjectNetwork::durations() const {
    std::vector<double> t;
    t.reserve(activities_.size());
    for (const auto& a : activities_) t.push_back(a.duration);
    return t;
}

std::vector<double> ProjectNetwork::max_durations() const {
    std::vector<double> t;
    t.reserve(activities_.size());
    for (const auto& a : activities_) {
        if (!a.max_duration)
            throw ParseError("activity '" + a.id + "' has no max_duration");
        t.push_back(*a.max_duration);
    }
    return t;
}

bool ProjectNetwork::has_max_durations() const noexcept {
    for (const auto& a : activities_)
        if (!a.max_duration) return false;
    return !activities_.empty();
}

ProjectNetwork parse_project_raw(const std::string& text, ProjectFormat format) {
    return format == ProjectFormat::json ? parse_json_project(text)
                                         : parse_csv_project(text);
}

ProjectNetwork parse_project(const std::string& text, ProjectFormat format) {
    ProjectNetwork net = parse_project_raw(text, format);
    net.require_valid();
    return net;
}

std::string serialize_project(const ProjectNetwork& net, ProjectFormat format) {
    if (format == ProjectFormat::json) {
        nlohmann::ordered_json doc;
        doc["nodes"] = net.nodes();
        doc["activities"] = nlohmann::ordered_json::array();
        for (const auto& a : net.activities()) {
            nlohmann::ordered_json ja;
            ja["id"] = a.id;
            ja["source"] = a.source;
            ja["sink"] = a.sink;
            ja["duration"] = a.duration;
            if (a.max_duration) ja["max_duration"] = *a.max_duration;
            doc["activities"].push_back(std::move(ja));
        }
        return doc.dump(2) + "\n";
    }
    bool any_max = false;
    for (const auto& a : net.activities()) any_max |= a.max_duration.has_value();
    std::string out = any_max ? "id,source,sink,duration,max_duration\n"
                              : "id,source,sink,duration\n";
    for (const auto& a : net.activities()) {
        out += a.id + "," + a.source + "," + a.sink + "," + format_double(a.duration);
        if (any_max) {
            out += ",";
            if (a.max_duration) out += format_double(*a.max_duration);
        }
        out += "\n";
    }
    return out;
}

TerminalSurgery add_virtual_terminals(const ProjectNetwork& net) {
    std::vector<std::string> starts, finishes;
    for (std::size_t i = 0; i < net.nodes().size(); ++i) {
        if (net.incoming()[i].empty()) starts.push_back(net.nodes()[i]);
        if (net.outgoing()[i].empty()) finishes.push_back(net.nodes()[i]);
    }

    std::unordered_set<std::string> node_ids(net.nodes().begin(), net.nodes().end());
    std::unordered_set<std::string> activity_ids;
    for (const auto& a : net.activities()) activity_ids.insert(a.id);
    auto unique_id = [](std::unordered_set<std::string>& used, std::string base) {
        std::string id = base;
        for (int k = 1; used.count(id); ++k) id = base + std::to_string(k);
        used.insert(id);
        return id;
    };

    std::vector<std::string> nodes = net.nodes();
    std::vector<Activity> activities = net.activities();
    TerminalSurgery result{net, {}, {}};

    if (starts.size() > 1) {
        std::string vstart = unique_id(node_ids, "_start");
        nodes.insert(nodes.begin(), vstart);
        result.added_nodes.push_back(vstart);
        for (const auto& s : starts) {
            Activity a;
            a.id = unique_id(activity_ids, "_" + vstart + "_" + s);
            a.source = vstart;
            a.sink = s;
            a.duration = 0.0;
            activities.push_back(std::move(a));
            result.added_activities.push_back(activities.back().id);
        }
    }
    if (finishes.size() > 1) {
        std::string vfinish = unique_id(node_ids, "_finish");
        nodes.push_back(vfinish);
        result.added_nodes.push_back(vfinish);
        for (const auto& f : finishes) {
            Activity a;
            a.id = unique_id(activity_ids, "_" + f + "_" + vfinish);
            a.source = f;
            a.sink = vfinish;
            a.duration = 0.0;
            activities.push_back(std::move(a));
            result.added_activities.push_back(activities.back().id);
        }
    }
    if (!result.added_nodes.empty())
        result.network = ProjectNetwork(std::move(nodes), std::move(activities));
    return result;
}

std::vector<std::string> topological_order(const ProjectNetwork& net) {
    const auto& nodes = net.nodes();
    std::vector<std::size_t> indegree(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) indegree[i] = net.incoming()[i].size();

    // Min-heap on node ids gives the lexicographic tie-break.
    auto cmp = [&](std::size_t a, std::size_t b) { return nodes[a] > nodes[b]; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> ready(cmp);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (indegree[i] == 0) ready.push(i);

    std::vector<std::string> order;
    std::vector<char> emitted(nodes.size(), 0);
    while (!ready.empty()) {
        std::size_t v = ready.top();
        ready.pop();
        emitted[v] = 1;
        order.push_back(nodes[v]);
        for (std::size_t a : net.outgoing()[v]) {
            std::size_t w = net.activity_sink(a);
            if (--indegree[w] == 0) ready.push(w);
        }
    }
    if (order.size() == nodes.size()) return order;

    // Kahn stalled: walk predecessors inside the remaining subgraph from the
    // lexicographically smallest leftover node until a node repeats.
    std::size_t seed = nodes.size();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (!emitted[i] && (seed == nodes.size() || nodes[i] < nodes[seed])) seed = i;
    std::vector<std::size_t> walk{seed};
    std::vector<std::size_t> pos_in_walk(nodes.size(), nodes.size());
    pos_in_walk[seed] = 0;
    std::size_t current = seed;
    while (true) {
        std::size_t prev = nodes.size();
        for (std::size_t a : net.incoming()[current]) {
            std::size_t s = net.activity_source(a);
            if (!emitted[s]) {
                prev = s;
                break;  // first incoming activity in declaration order
            }
        }
        if (prev == nodes.size())
            throw std::logic_error("stalled node without remaining predecessor");
        if (pos_in_walk[prev] != nodes.size()) {
            std::vector<std::string> cycle;
            for (std::size_t k = pos_in_walk[prev]; k < walk.size(); ++k)
                cycle.push_back(nodes[walk[k]]);
            std::reverse(cycle.begin(), cycle.end());  // forward arc order
            cycle.push_back(cycle.front());
            throw ParseError("cycle detected: " + join(cycle, " -> "));
        }
        pos_in_walk[prev] = walk.size();
        walk.push_back(prev);
        current = prev;
    }
}

IncidenceMatrix incidence_matrix(const ProjectNetwork& net, bool grounded) {
    const std::size_t n_nodes = net.nodes().size();
    const std::size_t n_acts = net.activities().size();
    std::size_t skip = grounded ? net.start_node() : n_nodes;

    IncidenceMatrix out;
    out.grounded = grounded;
    out.matrix = Matrix(grounded ? n_nodes - 1 : n_nodes, n_acts);
    std::vector<std::size_t> row_of(n_nodes, n_nodes);
    std::size_t r = 0;
    for (std::size_t i = 0; i < n_nodes; ++i) {
        if (i == skip) continue;
        row_of[i] = r++;
        out.node_order.push_back(net.nodes()[i]);
    }
    for (std::size_t a = 0; a < n_acts; ++a) {
        std::size_t s = net.activity_source(a);
        std::size_t t = net.activity_sink(a);
        if (row_of[s] != n_nodes) out.matrix(row_of[s], a) += 1.0;
        if (row_of[t] != n_nodes) out.matrix(row_of[t], a) -= 1.0;
    }
    return out;
}

}  // namespace routespec
