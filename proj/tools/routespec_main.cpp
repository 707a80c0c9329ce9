#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "routespec/errors.hpp"
#include "routespec/lp.hpp"
#include "routespec/network.hpp"
#include "routespec/nullspace.hpp"
#include "routespec/paths.hpp"
#include "routespec/report.hpp"
#include "routespec/schedule.hpp"
#include "routespec/svd.hpp"

namespace {

using routespec::AnalysisOptions;
using routespec::ParseError;
using routespec::ProjectFormat;
using routespec::ProjectNetwork;
using routespec::RouteMatrix;

struct CommonOpts {
    std::string input_path;
    std::string input_format = "auto";  // auto | json | csv
    std::string format = "json";        // json | text | csv (where supported)
    std::uint64_t max_paths = routespec::kDefaultMaxPaths;
    std::optional<double> rank_tol;
    std::optional<double> tie_tol;
    bool add_virtual_terminals = false;
};

void add_common(CLI::App* sub, CommonOpts& o, bool csv_output) {
    sub->add_option("input", o.input_path, "project network file (JSON or edge CSV)")
        ->required();
    sub->add_option("--input-format", o.input_format, "input format")
        ->check(CLI::IsMember({"auto", "json", "csv"}))
        ->capture_default_str();
    std::vector<std::string> formats = {"json", "text"};
    if (csv_output) formats.push_back("csv");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember(formats))
        ->capture_default_str();
    sub->add_option("--max-paths", o.max_paths, "simple-path enumeration budget")
        ->envname("ROUTESPEC_MAX_PATHS")
        ->capture_default_str();
    sub->add_option("--rank-tol", o.rank_tol, "SVD rank tolerance override");
    sub->add_option("--tie-tol", o.tie_tol, "critical-path tie tolerance override");
    sub->add_flag("--add-virtual-terminals", o.add_virtual_terminals,
                  "splice virtual start/finish nodes into multi-terminal graphs "
                  "(zero-duration activities, logged in the report)");
}

struct LoadedNetwork {
    ProjectNetwork net;
    std::vector<std::string> virtual_nodes;
    std::vector<std::string> virtual_activities;
};

LoadedNetwork load_network(const CommonOpts& o) {
    std::ifstream in(o.input_path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file '" + o.input_path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());

    ProjectFormat fmt;
    if (o.input_format == "json") {
        fmt = ProjectFormat::json;
    } else if (o.input_format == "csv") {
        fmt = ProjectFormat::edge_csv;
    } else if (o.input_path.size() >= 4 &&
               o.input_path.substr(o.input_path.size() - 4) == ".csv") {
        fmt = ProjectFormat::edge_csv;
    } else if (o.input_path.size() >= 5 &&
               o.input_path.substr(o.input_path.size() - 5) == ".json") {
        fmt = ProjectFormat::json;
    } else {
        // Sniff: JSON documents start with '{'.
        std::size_t k = text.find_first_not_of(" \t\r\n");
        fmt = (k != std::string::npos && text[k] == '{') ? ProjectFormat::json
                                                         : ProjectFormat::edge_csv;
    }

    if (o.add_virtual_terminals) {
        auto raw = routespec::parse_project_raw(text, fmt);
        auto surgery = routespec::add_virtual_terminals(raw);
        surgery.network.require_valid();
        return {std::move(surgery.network), std::move(surgery.added_nodes),
                std::move(surgery.added_activities)};
    }
    return {routespec::parse_project(text, fmt), {}, {}};
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size())
            throw ParseError(std::string(what) + ": cannot parse number '" + item + "'");
        values.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return values;
}

double parse_norm_order(const std::string& text) {
    if (text == "inf" || text == "infinity")
        return std::numeric_limits<double>::infinity();
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), p);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("norm order: cannot parse '" + text + "'");
    return p;
}

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void emit(const nlohmann::ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open output file '" + path + "'");
    out << content;
}

void run_analyze(const CommonOpts& o, const AnalysisOptions& ao,
                 const std::string& floats_csv_path) {
    LoadedNetwork loaded = load_network(o);
    routespec::AnalysisReport report = routespec::analyze(loaded.net, ao);
    report.virtual_nodes_added = loaded.virtual_nodes;
    report.virtual_activities_added = loaded.virtual_activities;
    if (!floats_csv_path.empty())
        write_file(floats_csv_path, routespec::floats_csv(report));
    if (o.format == "text")
        std::cout << routespec::report_text(report);
    else
        emit(routespec::report_json(report));
}

void run_paths(const CommonOpts& o) {
    RouteMatrix rm = routespec::enumerate_paths(load_network(o).net, o.max_paths);
    if (o.format == "csv") {
        std::cout << routespec::route_matrix_csv(rm);
    } else if (o.format == "text") {
        std::cout << rm.paths.size() << " paths\n";
        for (const auto& p : rm.paths) {
            std::cout << "path " << p.index << ":";
            for (std::size_t a : p.activities) std::cout << " " << rm.activity_ids[a];
            std::cout << "\n";
        }
    } else {
        emit(routespec::route_matrix_json(rm));
    }
}

void run_svd(const CommonOpts& o) {
    RouteMatrix rm = routespec::enumerate_paths(load_network(o).net, o.max_paths);
    routespec::SvdDecomposition dec = routespec::svd(rm, o.rank_tol);
    if (o.format == "text") {
        std::cout << "singular values:";
        for (double s : dec.sigma) std::cout << " " << fmt12(s);
        std::cout << "\nnumerical rank: " << dec.numerical_rank
                  << "\nrank tolerance: " << fmt12(dec.rank_tol) << "\n";
    } else {
        emit(routespec::svd_json(dec));
    }
}

void run_nullspace(const CommonOpts& o) {
    RouteMatrix rm = routespec::enumerate_paths(load_network(o).net, o.max_paths);
    routespec::NullspaceBasis basis = routespec::nullspace_basis(rm);
    if (o.format == "csv") {
        std::cout << routespec::nullspace_csv(basis);
    } else if (o.format == "text") {
        std::cout << "nullspace dimension: " << basis.dimension << "\n";
        for (const auto& v : basis.vectors) {
            std::cout << "vector:";
            for (long long x : v) std::cout << " " << x;
            std::cout << "\n";
        }
    } else {
        emit(routespec::nullspace_json(basis, rm.activity_ids));
    }
}

void run_pinv(const CommonOpts& o, const std::string& target_tau) {
    RouteMatrix rm = routespec::enumerate_paths(load_network(o).net, o.max_paths);
    routespec::Matrix pinv = routespec::pseudoinverse(rm, o.rank_tol);
    nlohmann::ordered_json doc = routespec::pinv_json(pinv);
    std::optional<routespec::LeastSquaresDurations> solution;
    std::optional<routespec::Reachability> reach;
    if (!target_tau.empty()) {
        auto tau = parse_number_list(target_tau, "target path durations");
        solution = routespec::least_squares_durations(rm, tau);
        reach = routespec::reachability(rm, tau);
        nlohmann::ordered_json target;
        target["tau"] = tau;
        target["least_squares_durations"] = solution->values;
        target["has_negative"] = solution->has_negative;
        target["reachability"] = routespec::reachability_json(*reach);
        doc["target"] = std::move(target);
    }
    if (o.format == "text") {
        for (std::size_t i = 0; i < pinv.rows(); ++i) {
            for (std::size_t j = 0; j < pinv.cols(); ++j)
                std::cout << (j ? " " : "") << fmt12(pinv(i, j));
            std::cout << "\n";
        }
        if (solution) {
            std::cout << "least-squares durations:";
            for (double x : solution->values) std::cout << " " << fmt12(x);
            std::cout << "\nreachable: " << (reach->reachable ? "yes" : "no") << "\n";
        }
    } else {
        emit(doc);
    }
}

void run_stress(const CommonOpts& o, const std::string& p_text) {
    LoadedNetwork loaded = load_network(o);
    RouteMatrix rm = routespec::enumerate_paths(loaded.net, o.max_paths);
    const double p = parse_norm_order(p_text);
    const auto t = loaded.net.durations();
    const auto t_max = loaded.net.max_durations();
    const double s = routespec::project_stress(rm, t, t_max, p);
    if (o.format == "text") {
        std::cout << "stress (p=" << p_text << "): " << fmt12(s) << "\n";
    } else {
        nlohmann::ordered_json doc;
        if (std::isinf(p))
            doc["p"] = "inf";
        else
            doc["p"] = routespec::json_real(p);
        doc["stress"] = routespec::json_real(s);
        emit(doc);
    }
}

void run_lp_export(const CommonOpts& o, const std::string& output_path) {
    LoadedNetwork loaded = load_network(o);
    const std::string lp = routespec::export_lp(loaded.net, loaded.net.durations());
    if (output_path.empty())
        std::cout << lp;
    else
        write_file(output_path, lp);
}

void run_spectral(const CommonOpts& o, double threshold, std::size_t order) {
    RouteMatrix rm = routespec::enumerate_paths(load_network(o).net, o.max_paths);
    routespec::SvdDecomposition dec = routespec::svd(rm, o.rank_tol);
    routespec::SpectralExpansion exp = routespec::spectral_networks(dec);
    if (order > 0) {
        routespec::Matrix rec = routespec::threshold_reconstruct(exp, order, threshold);
        const bool matches = rec == rm.matrix;
        if (o.format == "text") {
            for (std::size_t i = 0; i < rec.rows(); ++i) {
                for (std::size_t j = 0; j < rec.cols(); ++j)
                    std::cout << (j ? " " : "") << (rec(i, j) != 0.0 ? 1 : 0);
                std::cout << "\n";
            }
            std::cout << "matches route matrix: " << (matches ? "yes" : "no") << "\n";
        } else {
            nlohmann::ordered_json doc;
            doc["order"] = order;
            doc["threshold"] = routespec::json_real(threshold);
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < rec.rows(); ++i) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (std::size_t j = 0; j < rec.cols(); ++j)
                    row.push_back(rec(i, j) != 0.0 ? 1 : 0);
                rows.push_back(std::move(row));
            }
            doc["reconstruction"] = std::move(rows);
            doc["matches_route_matrix"] = matches;
            emit(doc);
        }
        return;
    }
    auto minimal = routespec::minimal_spectral_order(exp, threshold);
    if (o.format == "text") {
        std::cout << "threshold: " << fmt12(threshold) << "\nminimal order: ";
        if (minimal)
            std::cout << *minimal << "\n";
        else
            std::cout << "none\n";
    } else {
        nlohmann::ordered_json doc;
        doc["threshold"] = routespec::json_real(threshold);
        doc["singular_values"] = dec.sigma;
        if (minimal)
            doc["minimal_order"] = *minimal;
        else
            doc["minimal_order"] = nullptr;
        emit(doc);
    }
}

int fail(const routespec::Error& e) {
    nlohmann::ordered_json err;
    const char* kind = "input";
    if (e.code() == routespec::ErrorCode::budget) kind = "budget";
    if (e.code() == routespec::ErrorCode::numerical) kind = "numerical";
    err["error"]["kind"] = kind;
    err["error"]["code"] = e.exit_code();
    err["error"]["message"] = e.what();
    if (const auto* b = dynamic_cast<const routespec::BudgetError*>(&e)) {
        err["error"]["count"] = b->count();
        err["error"]["budget"] = b->budget();
    }
    std::cerr << err.dump() << "\n";
    return e.exit_code();
}

int fail_input(const std::string& message) {
    nlohmann::ordered_json err;
    err["error"]["kind"] = "input";
    err["error"]["code"] = 1;
    err["error"]["message"] = message;
    std::cerr << err.dump() << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"project network analysis through the route matrix"};
    app.set_version_flag("--version", "0.1.0");
    app.require_subcommand(1);

    CommonOpts common;
    AnalysisOptions analysis;
    std::string target_tau_text;
    std::string floats_csv_path;
    std::string stress_p = "2";
    std::string lp_output;
    double spectral_threshold = 0.5;
    std::size_t spectral_order = 0;

    CLI::App* analyze = app.add_subcommand("analyze", "full analysis report");
    add_common(analyze, common, /*csv_output=*/false);
    analyze->add_option("--target-tau", target_tau_text,
                        "comma-separated target path durations for the "
                        "least-squares solution");
    analyze->add_option("--threshold", analysis.spectral_threshold,
                        "spectral reconstruction threshold")
        ->capture_default_str();
    analyze->add_option("--floats-csv", floats_csv_path,
                        "also write per-activity total float CSV to this file");
    analyze->callback([&] {
        analysis.max_paths = common.max_paths;
        analysis.rank_tol = common.rank_tol;
        analysis.tie_tol = common.tie_tol;
        if (!target_tau_text.empty())
            analysis.target_tau =
                parse_number_list(target_tau_text, "target path durations");
        run_analyze(common, analysis, floats_csv_path);
    });

    CLI::App* paths = app.add_subcommand("paths", "route matrix and simple paths");
    add_common(paths, common, /*csv_output=*/true);
    paths->callback([&] { run_paths(common); });

    CLI::App* svd_cmd = app.add_subcommand("svd", "singular value decomposition");
    add_common(svd_cmd, common, /*csv_output=*/false);
    svd_cmd->callback([&] { run_svd(common); });

    CLI::App* nullspace = app.add_subcommand("nullspace", "exact nullspace basis");
    add_common(nullspace, common, /*csv_output=*/true);
    nullspace->callback([&] { run_nullspace(common); });

    CLI::App* pinv = app.add_subcommand("pinv", "Moore-Penrose pseudoinverse");
    add_common(pinv, common, /*csv_output=*/false);
    pinv->add_option("--target-tau", target_tau_text,
                     "comma-separated target path durations");
    pinv->callback([&] { run_pinv(common, target_tau_text); });

    CLI::App* stress = app.add_subcommand("stress", "project stress");
    add_common(stress, common, /*csv_output=*/false);
    stress->add_option("-p,--p", stress_p, "norm order (>= 1 or 'inf')")
        ->capture_default_str();
    stress->callback([&] { run_stress(common, stress_p); });

    CLI::App* lp = app.add_subcommand("lp-export", "longest-path linear program");
    add_common(lp, common, /*csv_output=*/false);
    lp->add_option("-o,--output", lp_output, "write the LP file here instead of stdout");
    lp->callback([&] { run_lp_export(common, lp_output); });

    CLI::App* spectral = app.add_subcommand("spectral", "spectral reconstruction");
    add_common(spectral, common, /*csv_output=*/false);
    spectral->add_option("--threshold", spectral_threshold, "reconstruction threshold")
        ->capture_default_str();
    spectral->add_option("--order", spectral_order,
                         "reconstruct from the first k spectral networks");
    spectral->callback([&] { run_spectral(common, spectral_threshold, spectral_order); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // help/version
        return fail_input(e.what());
    } catch (const routespec::Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        nlohmann::ordered_json err;
        err["error"]["kind"] = "internal";
        err["error"]["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 70;
    }
    return 0;
}
