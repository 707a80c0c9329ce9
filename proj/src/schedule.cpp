#include "routespec/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "routespec/errors.hpp"

namespace routespec {

namespace {

void check_length(std::size_t got, std::size_t want, const char* name) {
    if (got != want)
        throw ParseError(std::string(name) + " has length " + std::to_string(got) +
                         ", expected " + std::to_string(want));
}

double default_tie_tol(double tau) { return 1e-9 * std::max(1.0, tau); }

double p_norm(std::span<const double> v, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace

std::vector<double> path_durations(const RouteMatrix& rm, std::span<const double> t) {
    check_length(t.size(), rm.matrix.cols(), "duration vector");
    return rm.matrix.apply(t);
}

double completion_time(const RouteMatrix& rm, std::span<const double> t) {
    check_length(t.size(), rm.matrix.cols(), "duration vector");
    for (double x : t)
        if (x < 0.0)
            throw ParseError("completion time requires nonnegative durations");
    const auto tau = rm.matrix.apply(t);
    double m = 0.0;
    for (double x : tau) m = std::max(m, x);  // entries nonnegative, so max = inf-norm
    return m;
}

ScheduleReport forward_pass(const ProjectNetwork& net, std::span<const double> t) {
    net.require_valid();
    check_length(t.size(), net.activities().size(), "duration vector");

    ScheduleReport report;
    report.early_times.assign(net.nodes().size(), 0.0);
    for (const auto& id : topological_order(net)) {
        std::size_t v = net.node_index(id);
        for (std::size_t a : net.outgoing()[v]) {
            std::size_t w = net.activity_sink(a);
            report.early_times[w] =
                std::max(report.early_times[w], report.early_times[v] + t[a]);
        }
    }
    report.completion_time = report.early_times[net.finish_node()];
    return report;
}

std::vector<std::size_t> critical_paths(const RouteMatrix& rm, std::span<const double> t,
                                        std::optional<double> tie_tol) {
    check_length(t.size(), rm.matrix.cols(), "duration vector");
    const auto tau = rm.matrix.apply(t);
    double top = -std::numeric_limits<double>::infinity();
    for (double x : tau) top = std::max(top, x);
    const double tol = tie_tol.value_or(default_tie_tol(top));
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < tau.size(); ++i)
        if (tau[i] >= top - tol) rows.push_back(i);
    return rows;
}

std::vector<double> total_float(const RouteMatrix& rm, std::span<const double> t) {
    check_length(t.size(), rm.matrix.cols(), "duration vector");
    const auto tau = rm.matrix.apply(t);
    double top = -std::numeric_limits<double>::infinity();
    for (double x : tau) top = std::max(top, x);

    std::vector<double> floats(rm.matrix.cols());
    for (std::size_t j = 0; j < rm.matrix.cols(); ++j) {
        double longest = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rm.matrix.rows(); ++i)
            if (rm.matrix(i, j) != 0.0) longest = std::max(longest, tau[i]);
        if (std::isinf(longest))
            throw ParseError("activity '" + rm.activity_ids[j] + "' lies on no path");
        floats[j] = top - longest;
    }
    return floats;
}

ScheduleReport schedule_report(const ProjectNetwork& net, const RouteMatrix& rm,
                               std::span<const double> t,
                               std::optional<double> tie_tol) {
    ScheduleReport report = forward_pass(net, t);
    report.critical_path_indices = critical_paths(rm, t, tie_tol);
    report.total_float = total_float(rm, t);
    return report;
}

double project_stress(const RouteMatrix& rm, std::span<const double> t,
                      std::span<const double> t_max, double p) {
    check_length(t.size(), rm.matrix.cols(), "duration vector");
    check_length(t_max.size(), rm.matrix.cols(), "max duration vector");
    if (!(p >= 1.0))  // rejects NaN too
        throw ParseError("stress norm order p must be >= 1");
    for (std::size_t j = 0; j < t.size(); ++j) {
        if (t[j] < 0.0) throw ParseError("stress requires nonnegative durations");
        if (t[j] > t_max[j])
            throw ParseError("duration of activity '" + rm.activity_ids[j] +
                             "' exceeds its max duration");
    }
    const auto num = rm.matrix.apply(t);
    const auto den = rm.matrix.apply(t_max);
    const double d = p_norm(den, p);
    if (d == 0.0) throw ParseError("max durations give zero path durations");
    return p_norm(num, p) / d;
}

ShiftResult apply_duration_shift(std::span<const double> t, std::span<const double> delta,
                                 const RouteMatrix& rm) {
    check_length(t.size(), rm.matrix.cols(), "duration vector");
    check_length(delta.size(), rm.matrix.cols(), "shift vector");

    ShiftResult result;
    result.durations.resize(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
        result.durations[j] = t[j] + delta[j];
        if (result.durations[j] < 0.0)
            throw ParseError("shift makes the duration of activity '" +
                             rm.activity_ids[j] + "' negative");
    }
    const auto rdelta = rm.matrix.apply(delta);
    double change = 0.0;
    for (double x : rdelta) change = std::max(change, std::abs(x));
    result.same_tau = change <= default_tie_tol(completion_time(rm, t));
    return result;
}

}  // namespace routespec
