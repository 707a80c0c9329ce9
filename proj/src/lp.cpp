#include "routespec/lp.hpp"

#include <cmath>
#include <cstdio>

#include "routespec/errors.hpp"

namespace routespec {

namespace {

std::string format_coeff(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Appends "c x" terms in LP syntax: leading sign separated by spaces, unit
/// coefficients elided.
void append_terms(std::string& out, const std::vector<double>& coeffs,
                  const std::vector<std::string>& names) {
    bool first = true;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        const double c = coeffs[j];
        if (c == 0.0) continue;
        const double mag = std::abs(c);
        if (first) {
            if (c < 0.0) out += "- ";
            first = false;
        } else {
            out += c < 0.0 ? " - " : " + ";
        }
        if (mag != 1.0) out += format_coeff(mag) + " ";
        out += names[j];
    }
    if (first) out += "0 " + names[0];  // degenerate all-zero row
}

}  // namespace

LpModel lp_model(const ProjectNetwork& net, std::span<const double> t) {
    net.require_valid();
    if (t.size() != net.activities().size())
        throw ParseError("duration vector has length " + std::to_string(t.size()) +
                         ", expected " + std::to_string(net.activities().size()));

    LpModel model;
    const auto inc = incidence_matrix(net, /*grounded=*/false);
    model.constraints = inc.matrix;
    model.objective.assign(t.begin(), t.end());
    for (std::size_t j = 0; j < net.activities().size(); ++j)
        model.variable_names.push_back("x" + std::to_string(j + 1));
    model.rhs.assign(net.nodes().size(), 0.0);
    model.rhs[net.start_node()] = 1.0;
    model.rhs[net.finish_node()] = -1.0;
    for (std::size_t i = 0; i < net.nodes().size(); ++i)
        model.constraint_names.push_back("c" + std::to_string(i + 1));
    return model;
}

std::string export_lp(const ProjectNetwork& net, std::span<const double> t) {
    const LpModel model = lp_model(net, t);

    std::string out = "Maximize\n obj: ";
    append_terms(out, model.objective, model.variable_names);
    out += "\nSubject To\n";
    for (std::size_t i = 0; i < model.constraints.rows(); ++i) {
        std::vector<double> row(model.constraints.row(i).begin(),
                                model.constraints.row(i).end());
        out += " " + model.constraint_names[i] + ": ";
        append_terms(out, row, model.variable_names);
        out += " = " + format_coeff(model.rhs[i]) + "\n";
    }
    out += "Bounds\n";
    for (const auto& name : model.variable_names) out += " " + name + " >= 0\n";
    out += "End\n";
    return out;
}

}  // namespace routespec
