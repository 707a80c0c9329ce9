#include "routespec/nullspace.hpp"

#include <cmath>
#include <numeric>

#include "routespec/errors.hpp"

namespace routespec {

namespace {

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw NumericalError("integer overflow in exact elimination");
    return r;
}

long long checked_sub(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r))
        throw NumericalError("integer overflow in exact elimination");
    return r;
}

std::vector<std::vector<long long>> to_integer(const Matrix& a) {
    std::vector<std::vector<long long>> m(a.rows(), std::vector<long long>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double x = a(i, j);
            if (std::abs(x - std::round(x)) > 1e-9 || std::abs(x) > 9.0e18)
                throw ParseError("exact elimination requires integer entries");
            m[i][j] = std::llround(x);
        }
    return m;
}

/// Fraction-free Gauss-Jordan: after processing, every pivot column is zero
/// except for its pivot entry, and all pivot entries carry the same value.
/// Divisions are exact by the Bareiss identity.
struct Eliminated {
    std::vector<std::vector<long long>> m;
    std::vector<std::size_t> pivot_cols;
};

Eliminated eliminate(std::vector<std::vector<long long>> m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows == 0 ? 0 : m[0].size();
    std::vector<std::size_t> pivot_cols;
    long long prev = 1;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t p = r;
        while (p < rows && m[p][col] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[r], m[p]);
        const long long pivot = m[r][col];
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const long long factor = m[i][col];
            for (std::size_t j = 0; j < cols; ++j) {
                const long long num =
                    checked_sub(checked_mul(m[i][j], pivot), checked_mul(factor, m[r][j]));
                m[i][j] = num / prev;  // exact by construction
            }
        }
        prev = pivot;
        pivot_cols.push_back(col);
        ++r;
    }
    return {std::move(m), std::move(pivot_cols)};
}

void canonicalize(std::vector<long long>& v) {
    long long g = 0;
    for (long long x : v) g = std::gcd(g, x);
    if (g > 1)
        for (long long& x : v) x /= g;
    for (long long x : v) {
        if (x == 0) continue;
        if (x > 0)
            for (long long& y : v) y = -y;
        break;
    }
}

}  // namespace

NullspaceBasis nullspace_basis(const Matrix& a) {
    auto [m, pivot_cols] = eliminate(to_integer(a));
    const std::size_t cols = a.cols();
    const std::size_t rank = pivot_cols.size();

    // Common pivot value after the Jordan pass (1 for an empty pivot set).
    const long long d = rank == 0 ? 1 : m[rank - 1][pivot_cols[rank - 1]];

    NullspaceBasis basis;
    basis.exact_rank = rank;
    std::vector<char> is_pivot(cols, 0);
    for (std::size_t c : pivot_cols) is_pivot[c] = 1;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<long long> v(cols, 0);
        v[f] = d;
        for (std::size_t k = 0; k < rank; ++k) v[pivot_cols[k]] = -m[k][f];
        canonicalize(v);
        basis.vectors.push_back(std::move(v));
    }
    basis.dimension = basis.vectors.size();
    return basis;
}

NullspaceBasis nullspace_basis(const RouteMatrix& rm) { return nullspace_basis(rm.matrix); }

std::size_t exact_integer_rank(const Matrix& a) {
    return eliminate(to_integer(a)).pivot_cols.size();
}

std::vector<std::vector<double>> nullspace_from_svd(const SvdDecomposition& dec) {
    const std::size_t n = dec.vt.cols();
    const std::size_t rank = dec.numerical_rank;

    // Gram-Schmidt completion: project each standard basis vector off the
    // row space and the vectors accepted so far; keep it when a significant
    // residual remains. Deterministic and exactly n - rank vectors survive.
    std::vector<std::vector<double>> accepted;
    for (std::size_t e = 0; e < n && accepted.size() < n - rank; ++e) {
        std::vector<double> v(n, 0.0);
        v[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {  // re-orthogonalize once
            for (std::size_t r = 0; r < rank; ++r) {
                double dot = 0.0;
                for (std::size_t j = 0; j < n; ++j) dot += dec.vt(r, j) * v[j];
                for (std::size_t j = 0; j < n; ++j) v[j] -= dot * dec.vt(r, j);
            }
            for (const auto& w : accepted) {
                double dot = 0.0;
                for (std::size_t j = 0; j < n; ++j) dot += w[j] * v[j];
                for (std::size_t j = 0; j < n; ++j) v[j] -= dot * w[j];
            }
        }
        double norm_sq = 0.0;
        for (double x : v) norm_sq += x * x;
        // Some remaining standard vector always has squared residual >= 1/n,
        // so this threshold never strands the completion short of n - rank.
        if (norm_sq < 1e-8) continue;
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (double& x : v) x *= inv;
        accepted.push_back(std::move(v));
    }
    return accepted;
}

}  // namespace routespec
