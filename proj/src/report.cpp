#include "routespec/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <limits>

#include "routespec/errors.hpp"

namespace routespec {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

ordered_json real_array(const std::vector<double>& v) {
    ordered_json arr = ordered_json::array();
    for (double x : v) arr.push_back(json_real(x));
    return arr;
}

ordered_json matrix_rounded(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(json_real(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json matrix_full(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> path_activity_ids(const RouteMatrix& rm, std::size_t row) {
    std::vector<std::string> ids;
    for (std::size_t a : rm.paths[row].activities) ids.push_back(rm.activity_ids[a]);
    return ids;
}

}  // namespace

double json_real(double v) {
    return std::strtod(fmt12(v).c_str(), nullptr);
}

AnalysisReport analyze(const ProjectNetwork& net, const AnalysisOptions& options) {
    AnalysisReport report{net};
    report.route_matrix = enumerate_paths(net, options.max_paths);
    report.durations = net.durations();
    report.path_durations = path_durations(report.route_matrix, report.durations);
    report.schedule =
        schedule_report(net, report.route_matrix, report.durations, options.tie_tol);

    const SvdDecomposition dec = svd(report.route_matrix, options.rank_tol);
    report.singular_values = dec.sigma;
    report.numerical_rank = dec.numerical_rank;
    report.rank_tol = dec.rank_tol;
    report.relevance = relevance(dec, options.score_tol);
    report.spectral_threshold = options.spectral_threshold;
    report.spectral_order =
        minimal_spectral_order(spectral_networks(dec), options.spectral_threshold);
    report.nullspace = nullspace_basis(report.route_matrix);

    if (net.has_max_durations()) {
        const auto t_max = net.max_durations();
        StressSummary s;
        s.p1 = project_stress(report.route_matrix, report.durations, t_max, 1.0);
        s.p2 = project_stress(report.route_matrix, report.durations, t_max, 2.0);
        s.pinf = project_stress(report.route_matrix, report.durations, t_max,
                                std::numeric_limits<double>::infinity());
        report.stress = s;
    }
    if (options.target_tau) {
        TargetSolution target;
        target.tau = *options.target_tau;
        target.durations = least_squares_durations(report.route_matrix, target.tau);
        target.reach = reachability(report.route_matrix, target.tau);
        report.target = std::move(target);
    }
    report.reachability = reachability(report.route_matrix, report.path_durations);
    return report;
}

nlohmann::ordered_json report_json(const AnalysisReport& report) {
    const auto& net = report.network;
    const auto& rm = report.route_matrix;

    ordered_json doc;
    ordered_json network;
    network["node_count"] = net.nodes().size();
    network["activity_count"] = net.activities().size();
    network["nodes"] = net.nodes();
    network["start_node"] = net.nodes()[net.start_node()];
    network["finish_node"] = net.nodes()[net.finish_node()];
    ordered_json activities = ordered_json::array();
    for (const auto& a : net.activities()) {
        ordered_json ja;
        ja["id"] = a.id;
        ja["source"] = a.source;
        ja["sink"] = a.sink;
        ja["duration"] = json_real(a.duration);
        if (a.max_duration) ja["max_duration"] = json_real(*a.max_duration);
        activities.push_back(std::move(ja));
    }
    network["activities"] = std::move(activities);
    network["virtual_nodes_added"] = report.virtual_nodes_added;
    network["virtual_activities_added"] = report.virtual_activities_added;
    doc["network"] = std::move(network);

    doc["route_matrix"] = route_matrix_json(rm);

    ordered_json schedule;
    schedule["durations"] = real_array(report.durations);
    schedule["path_durations"] = real_array(report.path_durations);
    schedule["completion_time"] = json_real(report.schedule.completion_time);
    ordered_json critical = ordered_json::array();
    for (std::size_t row : report.schedule.critical_path_indices) {
        ordered_json jc;
        jc["index"] = row;
        jc["activities"] = path_activity_ids(rm, row);
        critical.push_back(std::move(jc));
    }
    schedule["critical_paths"] = std::move(critical);
    schedule["total_float"] = real_array(report.schedule.total_float);
    ordered_json early = ordered_json::object();
    for (std::size_t i = 0; i < net.nodes().size(); ++i)
        early[net.nodes()[i]] = json_real(report.schedule.early_times[i]);
    schedule["early_times"] = std::move(early);
    doc["schedule"] = std::move(schedule);

    ordered_json svd_summary;
    svd_summary["singular_values"] = real_array(report.singular_values);
    svd_summary["numerical_rank"] = report.numerical_rank;
    svd_summary["rank_tol"] = json_real(report.rank_tol);
    doc["svd"] = std::move(svd_summary);

    ordered_json rel;
    rel["dominant_index"] = report.relevance.dominant_index;
    rel["path_scores"] = real_array(report.relevance.path_scores);
    rel["activity_scores"] = real_array(report.relevance.activity_scores);
    rel["top_paths"] = report.relevance.top_paths;
    ordered_json top_acts = ordered_json::array();
    for (std::size_t j : report.relevance.top_activities)
        top_acts.push_back(rm.activity_ids[j]);
    rel["top_activities"] = std::move(top_acts);
    doc["relevance"] = std::move(rel);

    ordered_json spectral;
    spectral["threshold"] = json_real(report.spectral_threshold);
    if (report.spectral_order)
        spectral["minimal_order"] = *report.spectral_order;
    else
        spectral["minimal_order"] = nullptr;
    doc["spectral"] = std::move(spectral);

    doc["nullspace"] = nullspace_json(report.nullspace, rm.activity_ids);

    if (report.stress) {
        ordered_json stress;
        stress["p1"] = json_real(report.stress->p1);
        stress["p2"] = json_real(report.stress->p2);
        stress["pinf"] = json_real(report.stress->pinf);
        doc["stress"] = std::move(stress);
    }
    if (report.target) {
        ordered_json target;
        target["tau"] = real_array(report.target->tau);
        target["least_squares_durations"] = real_array(report.target->durations.values);
        target["has_negative"] = report.target->durations.has_negative;
        target["reachability"] = reachability_json(report.target->reach);
        doc["target"] = std::move(target);
    }
    doc["reachability"] = reachability_json(report.reachability);
    return doc;
}

std::string report_text(const AnalysisReport& report) {
    const auto& net = report.network;
    const auto& rm = report.route_matrix;
    std::string out;

    out += "network: " + std::to_string(net.nodes().size()) + " nodes, " +
           std::to_string(net.activities().size()) + " activities, start " +
           net.nodes()[net.start_node()] + ", finish " +
           net.nodes()[net.finish_node()] + "\n";
    if (!report.virtual_nodes_added.empty()) {
        out += "virtual terminals added: nodes";
        for (const auto& n : report.virtual_nodes_added) out += " " + n;
        out += ", activities";
        for (const auto& a : report.virtual_activities_added) out += " " + a;
        out += "\n";
    }

    std::vector<char> critical(rm.paths.size(), 0);
    for (std::size_t row : report.schedule.critical_path_indices) critical[row] = 1;
    out += "paths: " + std::to_string(rm.paths.size()) + "\n";
    for (std::size_t i = 0; i < rm.paths.size(); ++i) {
        out += "path " + std::to_string(i) + ":";
        for (const auto& id : path_activity_ids(rm, i)) out += " " + id;
        out += " (duration " + fmt4(report.path_durations[i]) + ")";
        if (critical[i]) out += " [critical]";
        out += "\n";
    }
    out += "completion time: " + fmt4(report.schedule.completion_time) + "\n";
    out += "total float:";
    for (std::size_t j = 0; j < rm.activity_ids.size(); ++j)
        out += " " + rm.activity_ids[j] + "=" + fmt4(report.schedule.total_float[j]);
    out += "\n";

    out += "singular values:";
    for (double s : report.singular_values) out += " " + fmt4(s);
    out += "\nnumerical rank: " + std::to_string(report.numerical_rank) + "\n";
    out += "top paths:";
    for (std::size_t i : report.relevance.top_paths) out += " " + std::to_string(i);
    out += "\ntop activities:";
    for (std::size_t j : report.relevance.top_activities)
        out += " " + rm.activity_ids[j];
    out += "\n";

    out += "minimal spectral order (threshold " + fmt4(report.spectral_threshold) +
           "): ";
    out += report.spectral_order ? std::to_string(*report.spectral_order)
                                 : std::string("none");
    out += "\n";

    out += "nullspace dimension: " + std::to_string(report.nullspace.dimension) + "\n";
    for (const auto& v : report.nullspace.vectors) {
        out += "nullspace vector:";
        for (long long x : v) out += " " + std::to_string(x);
        out += "\n";
    }

    if (report.stress) {
        out += "stress: p=1 " + fmt4(report.stress->p1) + ", p=2 " +
               fmt4(report.stress->p2) + ", p=inf " + fmt4(report.stress->pinf) + "\n";
    }
    if (report.target) {
        out += "target path durations:";
        for (double x : report.target->tau) out += " " + fmt4(x);
        out += "\nleast-squares durations:";
        for (double x : report.target->durations.values) out += " " + fmt4(x);
        out += "\n";
        if (report.target->durations.has_negative)
            out += "warning: least-squares durations contain negative entries\n";
        out += std::string("target reachable: ") +
               (report.target->reach.reachable ? "yes" : "no") + " (residual " +
               fmt4(report.target->reach.residual) + ")\n";
    }
    out += std::string("current path durations reachable: ") +
           (report.reachability.reachable ? "yes" : "no") + "\n";
    return out;
}

std::string floats_csv(const AnalysisReport& report) {
    std::string out = "activity,total_float\n";
    for (std::size_t j = 0; j < report.route_matrix.activity_ids.size(); ++j)
        out += report.route_matrix.activity_ids[j] + "," +
               fmt12(report.schedule.total_float[j]) + "\n";
    return out;
}

nlohmann::ordered_json route_matrix_json(const RouteMatrix& rm) {
    ordered_json doc;
    doc["activity_ids"] = rm.activity_ids;
    ordered_json paths = ordered_json::array();
    for (const auto& p : rm.paths) paths.push_back(path_activity_ids(rm, p.index));
    doc["paths"] = std::move(paths);
    doc["matrix"] = matrix_rounded(rm.matrix);
    return doc;
}

nlohmann::ordered_json svd_json(const SvdDecomposition& dec) {
    ordered_json doc;
    doc["singular_values"] = dec.sigma;
    doc["numerical_rank"] = dec.numerical_rank;
    doc["rank_tol"] = dec.rank_tol;
    doc["u"] = matrix_full(dec.u);
    doc["vt"] = matrix_full(dec.vt);
    return doc;
}

nlohmann::ordered_json nullspace_json(const NullspaceBasis& basis,
                                      const std::vector<std::string>& activity_ids) {
    ordered_json doc;
    doc["activity_ids"] = activity_ids;
    doc["dimension"] = basis.dimension;
    doc["exact_rank"] = basis.exact_rank;
    doc["vectors"] = basis.vectors;
    return doc;
}

std::string nullspace_csv(const NullspaceBasis& basis) {
    std::string out;
    for (const auto& v : basis.vectors) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j) out += ",";
            out += std::to_string(v[j]);
        }
        out += "\n";
    }
    return out;
}

nlohmann::ordered_json pinv_json(const Matrix& pinv) {
    ordered_json doc;
    doc["pseudoinverse"] = matrix_full(pinv);
    return doc;
}

nlohmann::ordered_json reachability_json(const Reachability& reach) {
    ordered_json doc;
    doc["reachable"] = reach.reachable;
    doc["residual"] = json_real(reach.residual);
    return doc;
}

}  // namespace routespec
