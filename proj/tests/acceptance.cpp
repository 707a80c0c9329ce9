// Acceptance gate: runs every shipped accuracy criterion at its stated
// tolerance and prints exactly one PASS/FAIL line per criterion (SKIP is
// reserved for the external-solver integration when no solver is present).
// Exit code is the number of failures.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
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
#include "test_support.hpp"

using namespace routespec;
using namespace testsupport;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kPropertySeed = 20240817;

int failures = 0;

void report(int idx, bool ok, const std::string& label) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", idx, label.c_str());
    if (!ok) ++failures;
}

void report_skip(int idx, const std::string& label) {
    std::printf("[SKIP] criterion %2d: %s\n", idx, label.c_str());
}

void guarded(int idx, const std::string& label, bool (*body)()) {
    bool ok = false;
    std::string note;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note = std::string(" (exception: ") + e.what() + ")";
    }
    report(idx, ok, label + note);
}

bool near_all(const std::vector<double>& got, const std::vector<double>& want,
              double tol) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i)
        if (!(std::abs(got[i] - want[i]) <= tol)) return false;
    return true;
}

// Exact integer product R * v for a 0/1 matrix row set.
bool integer_kernel_exact(const Matrix& r, const std::vector<long long>& v) {
    for (std::size_t i = 0; i < r.rows(); ++i) {
        long long dot = 0;
        for (std::size_t j = 0; j < r.cols(); ++j)
            if (r(i, j) != 0.0) dot += v[j];
        if (dot != 0) return false;
    }
    return true;
}

// --------------------------------------------------------------- criteria --

bool criterion1() {
    return enumerate_paths(toy_network()).matrix == toy_route_matrix_expected();
}

bool criterion2() {
    RouteMatrix rm = enumerate_paths(toy_network());
    const std::vector<double> want = {10, 12, 10};
    bool ok = path_durations(rm, toy_t1()) == want;
    ok = ok && completion_time(rm, toy_t1()) == 12.0;
    ok = ok && near_all(path_durations(rm, toy_t2()), want, 1e-12);
    ok = ok && std::abs(completion_time(rm, toy_t2()) - 12.0) <= 1e-12;
    return ok;
}

bool criterion3() {
    RouteMatrix rm = enumerate_paths(toy_network());
    NullspaceBasis basis = nullspace_basis(rm);
    const auto reference = toy_nullspace_expected();
    bool ok = basis.dimension == reference.size();
    // Mutual containment by exact rational solves (128-bit elimination).
    for (const auto& r : reference) ok = ok && span_contains(basis.vectors, r);
    for (const auto& v : basis.vectors) ok = ok && span_contains(reference, v);
    for (const auto& v : basis.vectors) ok = ok && integer_kernel_exact(rm.matrix, v);
    return ok;
}

bool criterion4() {
    RouteMatrix rm = enumerate_paths(toy_network());
    Matrix pinv = pseudoinverse(rm);
    bool ok = pinv.max_abs_diff(toy_pinv_expected()) <= 1e-9;
    const auto t = pinv.apply(std::vector<double>{10, 12, 10});
    return ok && near_all(t, toy_t2(), 1e-9);
}

bool criterion5() {
    RelevanceReport rel = relevance(svd(enumerate_paths(toy_network())), 1e-6);
    return rel.top_paths == std::vector<std::size_t>{1} &&
           rel.top_activities == std::vector<std::size_t>{0, 4};  // A1, A5
}

bool criterion6() {
    RouteMatrix rm = enumerate_paths(toy_network());
    SvdDecomposition dec = svd(rm);
    if (dec.sigma.size() != 3) return false;
    // Independent oracle: eigenvalues of the path Gram matrix R * R^T from a
    // two-sided symmetric Jacobi. (For this network they are 4, 2, 1, so the
    // singular values are 2, sqrt 2, 1.)
    const auto eig = symmetric_eigenvalues(rm.matrix * rm.matrix.transposed());
    bool ok = true;
    for (std::size_t i = 0; i < 3; ++i)
        ok = ok && std::abs(dec.sigma[i] - std::sqrt(eig[i])) <= 1e-9;
    // The coarsely printed values are only honored at +-0.5.
    const double printed[3] = {2.0, 1.4, 1.0};
    for (std::size_t i = 0; i < 3; ++i)
        ok = ok && std::abs(dec.sigma[i] - printed[i]) <= 0.5;
    return ok;
}

bool criterion7() {
    RouteMatrix rm = enumerate_paths(toy_network());
    SpectralExpansion exp = spectral_networks(svd(rm));
    bool ok = exp.cumulative.back().max_abs_diff(rm.matrix) <= 1e-9;
    ok = ok && threshold_reconstruct(exp, 1, 0.6) == Matrix{{0, 0, 0, 0, 0},
                                                            {1, 0, 1, 0, 1},
                                                            {0, 0, 0, 0, 0}};
    ok = ok && threshold_reconstruct(exp, 2, 0.6) == rm.matrix;
    return ok && minimal_spectral_order(exp, 0.6) == std::optional<std::size_t>{2};
}

bool criterion8() {
    std::mt19937_64 rng(kPropertySeed);
    for (int k = 0; k < 1000; ++k) {
        ProjectNetwork net = random_dag(rng);
        RouteMatrix rm = enumerate_paths(net);
        const std::vector<double> t = net.durations();
        if (std::abs(forward_pass(net, t).completion_time - completion_time(rm, t)) >
            1e-12)
            return false;
        const IncidenceMatrix inc = incidence_matrix(net, /*grounded=*/false);
        const std::size_t start = net.start_node(), finish = net.finish_node();
        for (std::size_t i = 0; i < rm.matrix.rows(); ++i) {
            const auto flow = inc.matrix.apply(rm.matrix.row(i));
            for (std::size_t v = 0; v < flow.size(); ++v) {
                const double b = v == start ? 1.0 : v == finish ? -1.0 : 0.0;
                if (flow[v] != b) return false;
            }
        }
    }
    return true;
}

bool criterion9() {
    std::mt19937_64 rng(8675309);
    for (int k = 0; k < 200; ++k) {
        Matrix a = random_01_matrix(rng);  // up to 50 x 30
        Matrix p = pseudoinverse(a);
        const Matrix ap = a * p;
        const Matrix pa = p * a;
        if ((ap * a).max_abs_diff(a) > 1e-9) return false;
        if ((pa * p).max_abs_diff(p) > 1e-9) return false;
        if (ap.max_abs_diff(ap.transposed()) > 1e-9) return false;
        if (pa.max_abs_diff(pa.transposed()) > 1e-9) return false;
    }
    return true;
}

bool criterion10() {
    RouteMatrix rm = enumerate_paths(toy_network());
    for (double p : {1.0, 2.0, kInf})
        if (project_stress(rm, toy_tmax(), toy_tmax(), p) != 1.0) return false;

    std::mt19937_64 rng(424243);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::vector<double> caps = toy_tmax();
    for (int k = 0; k < 100; ++k) {
        std::vector<double> upper(caps.size()), lower(caps.size());
        for (std::size_t j = 0; j < caps.size(); ++j) {
            upper[j] = unit(rng) * caps[j];
            lower[j] = unit(rng) * upper[j];
        }
        for (double p : {1.0, 2.0, kInf})
            if (project_stress(rm, lower, caps, p) >
                project_stress(rm, upper, caps, p))
                return false;
    }

    return std::abs(project_stress(rm, toy_t1(), toy_tmax(), 2.0) -
                    std::sqrt(344.0) / std::sqrt(513.0)) <= 1e-9;
}

int criterion11_exit_code() {
    char tmpl[] = "/tmp/routespec-accept-XXXXXX";
    const char* dir = mkdtemp(tmpl);
    if (!dir) return -1;
    const std::string base = dir;

    nlohmann::ordered_json manifest;
    manifest["tolerance"] = 1e-6;
    nlohmann::ordered_json cases = nlohmann::ordered_json::array();

    auto add_case = [&](const ProjectNetwork& net, int index) {
        const std::string name = "case" + std::to_string(index) + ".json";
        std::ofstream out(base + "/" + name, std::ios::binary);
        out << serialize_project(net, ProjectFormat::json);
        nlohmann::ordered_json c;
        c["network"] = name;
        c["tau"] = forward_pass(net, net.durations()).completion_time;
        cases.push_back(std::move(c));
    };

    add_case(toy_network(), 0);
    std::mt19937_64 rng(991);
    for (int k = 1; k <= 20; ++k) add_case(random_dag(rng), k);
    manifest["cases"] = std::move(cases);
    {
        std::ofstream out(base + "/expected.json", std::ios::binary);
        out << manifest.dump(2) << "\n";
    }

    const std::string cmd = "python3 \"" ROUTESPEC_LP_CHECK "\" \"" ROUTESPEC_CLI_PATH
                            "\" \"" + base + "\" > \"" + base + "/log.txt\" 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

bool criterion12() {
    std::mt19937_64 rng(kPropertySeed);  // same instances as criterion 8
    for (int k = 0; k < 1000; ++k) {
        RouteMatrix rm = enumerate_paths(random_dag(rng));
        const NullspaceBasis basis = nullspace_basis(rm);
        const SvdDecomposition dec = svd(rm);
        if (basis.dimension + dec.numerical_rank != rm.matrix.cols()) return false;
    }

    // Full path-rank makes every target reachable, balanced or not.
    RouteMatrix rm = enumerate_paths(toy_network());
    std::mt19937_64 tau_rng(5150);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    std::vector<std::vector<double>> targets = {
        {10, 12, 10}, {1, 0, 0}, {0, 0, 0}, {-3, 7, 100}};
    for (int k = 0; k < 20; ++k)
        targets.push_back({coord(tau_rng), coord(tau_rng), coord(tau_rng)});
    for (const auto& tau : targets)
        if (!reachability(rm, tau).reachable) return false;
    return true;
}

}  // namespace

int main() {
    guarded(1, "toy route matrix enumerates exactly, rows in canonical order",
            criterion1);
    guarded(2, "toy path durations (10,12,10) and completion 12; min-norm durations "
               "agree within 1e-12",
            criterion2);
    guarded(3, "nullspace basis spans the reference kernel (exact rational solves, "
               "R*v = 0 exact)",
            criterion3);
    guarded(4, "pseudoinverse matches the fraction matrix and maps (10,12,10) to the "
               "min-norm durations within 1e-9",
            criterion4);
    guarded(5, "dominant triplet selects path 1 and activity tie set {A1, A5} "
               "(score_tol 1e-6)",
            criterion5);
    guarded(6, "singular values match the eigenvalue oracle within 1e-9 and printed "
               "rounding within 0.5",
            criterion6);
    guarded(7, "spectral terms rebuild R within 1e-9; threshold 0.6 goldens at k=1, "
               "k=2; minimal order 2",
            criterion7);
    guarded(8, "1000 random DAGs: forward pass equals max path duration within 1e-12; "
               "flow rows exact",
            criterion8);
    guarded(9, "Moore-Penrose conditions within 1e-9 on 200 random 0/1 matrices up to "
               "50x30",
            criterion9);
    guarded(10, "stress: caps give 1 for p in {1,2,inf}; monotone on 100 pairs; toy "
                "value within 1e-9",
            criterion10);
    {
        const std::string label =
            "LP export: external optimum equals completion time within 1e-6 on toy + "
            "20 networks";
        int rc = -1;
        try {
            rc = criterion11_exit_code();
        } catch (const std::exception&) {
            rc = -1;
        }
        if (rc == 77)
            report_skip(11, label + " (no LP solver available)");
        else
            report(11, rc == 0, label);
    }
    guarded(12, "rank-nullity on all generated instances; toy reachability holds for "
                "arbitrary targets",
            criterion12);

    if (failures == 0) std::printf("acceptance: all criteria passed\n");
    else std::printf("acceptance: %d criteria failed\n", failures);
    return failures;
}
