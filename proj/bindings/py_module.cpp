// Python bindings: thin wrappers over the C++ core. Matrices cross the
// boundary as nested lists of floats, which keeps the module free of any
// array-library dependency.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

#include "routespec/errors.hpp"
#include "routespec/lp.hpp"
#include "routespec/network.hpp"
#include "routespec/nullspace.hpp"
#include "routespec/paths.hpp"
#include "routespec/report.hpp"
#include "routespec/schedule.hpp"
#include "routespec/svd.hpp"

namespace py = pybind11;
using namespace routespec;

namespace {

std::vector<std::vector<double>> to_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        rows[i].assign(m.row(i).begin(), m.row(i).end());
    return rows;
}

ProjectFormat parse_format(const std::string& name) {
    if (name == "json") return ProjectFormat::json;
    if (name == "csv") return ProjectFormat::edge_csv;
    throw ParseError("unknown project format '" + name + "' (expected json or csv)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "project network analysis through the route matrix";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<BudgetError>(m, "BudgetError", base);
    py::register_exception<NumericalError>(m, "NumericalError", base);

    py::class_<Activity>(m, "Activity")
        .def(py::init([](std::string id, std::string source, std::string sink,
                         double duration, std::optional<double> max_duration) {
                 return Activity{std::move(id), std::move(source), std::move(sink),
                                 duration, max_duration};
             }),
             py::arg("id"), py::arg("source"), py::arg("sink"), py::arg("duration"),
             py::arg("max_duration") = std::nullopt)
        .def_readwrite("id", &Activity::id)
        .def_readwrite("source", &Activity::source)
        .def_readwrite("sink", &Activity::sink)
        .def_readwrite("duration", &Activity::duration)
        .def_readwrite("max_duration", &Activity::max_duration)
        .def("__repr__", [](const Activity& a) {
            return "Activity(" + a.id + ": " + a.source + " -> " + a.sink + ")";
        });

    py::class_<ProjectNetwork>(m, "ProjectNetwork")
        .def(py::init([](std::vector<std::string> nodes, std::vector<Activity> acts) {
                 return ProjectNetwork(std::move(nodes), std::move(acts));
             }),
             py::arg("nodes"), py::arg("activities"))
        .def_property_readonly("nodes",
                               [](const ProjectNetwork& n) { return n.nodes(); })
        .def_property_readonly(
            "activities", [](const ProjectNetwork& n) { return n.activities(); })
        .def("validate", &ProjectNetwork::validate)
        .def("durations", &ProjectNetwork::durations)
        .def("has_max_durations", &ProjectNetwork::has_max_durations)
        .def("max_durations", &ProjectNetwork::max_durations)
        .def("start_node",
             [](const ProjectNetwork& n) { return n.nodes()[n.start_node()]; })
        .def("finish_node",
             [](const ProjectNetwork& n) { return n.nodes()[n.finish_node()]; })
        .def("__repr__", [](const ProjectNetwork& n) {
            return "ProjectNetwork(" + std::to_string(n.nodes().size()) + " nodes, " +
                   std::to_string(n.activities().size()) + " activities)";
        });

    py::class_<TerminalSurgery>(m, "TerminalSurgery")
        .def_readonly("network", &TerminalSurgery::network)
        .def_readonly("added_nodes", &TerminalSurgery::added_nodes)
        .def_readonly("added_activities", &TerminalSurgery::added_activities);

    py::class_<RouteMatrix>(m, "RouteMatrix")
        .def_readonly("activity_ids", &RouteMatrix::activity_ids)
        .def_property_readonly("paths",
                               [](const RouteMatrix& rm) {
                                   std::vector<std::vector<std::size_t>> out;
                                   for (const auto& p : rm.paths)
                                       out.push_back(p.activities);
                                   return out;
                               })
        .def_property_readonly(
            "matrix", [](const RouteMatrix& rm) { return to_rows(rm.matrix); })
        .def("__len__", [](const RouteMatrix& rm) { return rm.paths.size(); });

    py::class_<ScheduleReport>(m, "ScheduleReport")
        .def_readonly("completion_time", &ScheduleReport::completion_time)
        .def_readonly("early_times", &ScheduleReport::early_times)
        .def_readonly("critical_path_indices", &ScheduleReport::critical_path_indices)
        .def_readonly("total_float", &ScheduleReport::total_float);

    py::class_<ShiftResult>(m, "ShiftResult")
        .def_readonly("durations", &ShiftResult::durations)
        .def_readonly("same_tau", &ShiftResult::same_tau);

    py::class_<SvdDecomposition>(m, "SvdDecomposition")
        .def_property_readonly("u",
                               [](const SvdDecomposition& d) { return to_rows(d.u); })
        .def_readonly("sigma", &SvdDecomposition::sigma)
        .def_property_readonly(
            "vt", [](const SvdDecomposition& d) { return to_rows(d.vt); })
        .def_readonly("numerical_rank", &SvdDecomposition::numerical_rank)
        .def_readonly("rank_tol", &SvdDecomposition::rank_tol);

    py::class_<RelevanceReport>(m, "RelevanceReport")
        .def_readonly("dominant_index", &RelevanceReport::dominant_index)
        .def_readonly("path_scores", &RelevanceReport::path_scores)
        .def_readonly("activity_scores", &RelevanceReport::activity_scores)
        .def_readonly("top_paths", &RelevanceReport::top_paths)
        .def_readonly("top_activities", &RelevanceReport::top_activities);

    py::class_<SpectralExpansion>(m, "SpectralExpansion")
        .def_property_readonly("terms",
                               [](const SpectralExpansion& e) {
                                   std::vector<std::vector<std::vector<double>>> out;
                                   for (const auto& t : e.terms)
                                       out.push_back(to_rows(t));
                                   return out;
                               })
        .def_property_readonly("cumulative", [](const SpectralExpansion& e) {
            std::vector<std::vector<std::vector<double>>> out;
            for (const auto& c : e.cumulative) out.push_back(to_rows(c));
            return out;
        });

    py::class_<NullspaceBasis>(m, "NullspaceBasis")
        .def_readonly("vectors", &NullspaceBasis::vectors)
        .def_readonly("dimension", &NullspaceBasis::dimension)
        .def_readonly("exact_rank", &NullspaceBasis::exact_rank);

    py::class_<LeastSquaresDurations>(m, "LeastSquaresDurations")
        .def_readonly("values", &LeastSquaresDurations::values)
        .def_readonly("has_negative", &LeastSquaresDurations::has_negative);

    py::class_<Reachability>(m, "Reachability")
        .def_readonly("reachable", &Reachability::reachable)
        .def_readonly("residual", &Reachability::residual);

    m.def(
        "parse_project",
        [](const std::string& text, const std::string& format) {
            return parse_project(text, parse_format(format));
        },
        py::arg("text"), py::arg("format") = "json");
    m.def(
        "serialize_project",
        [](const ProjectNetwork& net, const std::string& format) {
            return serialize_project(net, parse_format(format));
        },
        py::arg("network"), py::arg("format") = "json");
    m.def(
        "add_virtual_terminals",
        [](const std::string& text, const std::string& format) {
            return add_virtual_terminals(parse_project_raw(text, parse_format(format)));
        },
        py::arg("text"), py::arg("format") = "json",
        "Parse without validation, then splice virtual terminals if needed.");

    m.def("count_paths", &count_paths, py::arg("network"));
    m.def("enumerate_paths", &enumerate_paths, py::arg("network"),
          py::arg("max_paths") = kDefaultMaxPaths);

    m.def(
        "path_durations",
        [](const RouteMatrix& rm, const std::vector<double>& t) {
            return path_durations(rm, t);
        },
        py::arg("route_matrix"), py::arg("durations"));
    m.def(
        "completion_time",
        [](const RouteMatrix& rm, const std::vector<double>& t) {
            return completion_time(rm, t);
        },
        py::arg("route_matrix"), py::arg("durations"));
    m.def(
        "forward_pass",
        [](const ProjectNetwork& net, const std::vector<double>& t) {
            return forward_pass(net, t);
        },
        py::arg("network"), py::arg("durations"));
    m.def(
        "schedule_report",
        [](const ProjectNetwork& net, const RouteMatrix& rm,
           const std::vector<double>& t, std::optional<double> tie_tol) {
            return schedule_report(net, rm, t, tie_tol);
        },
        py::arg("network"), py::arg("route_matrix"), py::arg("durations"),
        py::arg("tie_tol") = std::nullopt);
    m.def(
        "critical_paths",
        [](const RouteMatrix& rm, const std::vector<double>& t,
           std::optional<double> tie_tol) { return critical_paths(rm, t, tie_tol); },
        py::arg("route_matrix"), py::arg("durations"), py::arg("tie_tol") = std::nullopt);
    m.def(
        "total_float",
        [](const RouteMatrix& rm, const std::vector<double>& t) {
            return total_float(rm, t);
        },
        py::arg("route_matrix"), py::arg("durations"));
    m.def(
        "project_stress",
        [](const RouteMatrix& rm, const std::vector<double>& t,
           const std::vector<double>& t_max, double p) {
            return project_stress(rm, t, t_max, p);
        },
        py::arg("route_matrix"), py::arg("durations"), py::arg("max_durations"),
        py::arg("p") = 2.0);
    m.def(
        "apply_duration_shift",
        [](const std::vector<double>& t, const std::vector<double>& delta,
           const RouteMatrix& rm) { return apply_duration_shift(t, delta, rm); },
        py::arg("durations"), py::arg("delta"), py::arg("route_matrix"));

    m.def(
        "svd",
        [](const RouteMatrix& rm, std::optional<double> rank_tol) {
            return svd(rm, rank_tol);
        },
        py::arg("route_matrix"), py::arg("rank_tol") = std::nullopt);
    m.def("relevance", &relevance, py::arg("decomposition"),
          py::arg("score_tol") = 1e-6);
    m.def("spectral_networks", &spectral_networks, py::arg("decomposition"));
    m.def(
        "threshold_reconstruct",
        [](const SpectralExpansion& exp, std::size_t k, double threshold) {
            return to_rows(threshold_reconstruct(exp, k, threshold));
        },
        py::arg("expansion"), py::arg("order"), py::arg("threshold"));
    m.def("minimal_spectral_order", &minimal_spectral_order, py::arg("expansion"),
          py::arg("threshold"));

    m.def(
        "nullspace_basis",
        [](const RouteMatrix& rm) { return nullspace_basis(rm); },
        py::arg("route_matrix"));
    m.def(
        "pseudoinverse",
        [](const RouteMatrix& rm, std::optional<double> rank_tol) {
            return to_rows(pseudoinverse(rm, rank_tol));
        },
        py::arg("route_matrix"), py::arg("rank_tol") = std::nullopt);
    m.def(
        "least_squares_durations",
        [](const RouteMatrix& rm, const std::vector<double>& tau) {
            return least_squares_durations(rm, tau);
        },
        py::arg("route_matrix"), py::arg("tau"));
    m.def(
        "reachability",
        [](const RouteMatrix& rm, const std::vector<double>& tau) {
            return reachability(rm, tau);
        },
        py::arg("route_matrix"), py::arg("tau"));

    m.def(
        "export_lp",
        [](const ProjectNetwork& net, const std::vector<double>& t) {
            return export_lp(net, t);
        },
        py::arg("network"), py::arg("durations"));

    m.def(
        "analyze_report",
        [](const ProjectNetwork& net, std::optional<std::vector<double>> target_tau,
           double spectral_threshold, std::uint64_t max_paths, double score_tol) {
            AnalysisOptions options;
            options.max_paths = max_paths;
            options.spectral_threshold = spectral_threshold;
            options.score_tol = score_tol;
            options.target_tau = std::move(target_tau);
            return report_json(analyze(net, options)).dump();
        },
        py::arg("network"), py::arg("target_tau") = std::nullopt,
        py::arg("spectral_threshold") = 0.5, py::arg("max_paths") = kDefaultMaxPaths,
        py::arg("score_tol") = 1e-6,
        "Full analysis serialized as a JSON string (same structure as the CLI).");
}
