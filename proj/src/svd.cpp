#include "routespec/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "routespec/errors.hpp"

namespace routespec {

namespace {

constexpr int kMaxSweeps = 60;

/// One-sided Jacobi on a matrix with rows >= cols: rotates column pairs of a
/// working copy until all pairs are orthogonal, accumulating the rotations
/// in V. Returns all min-dimension triplets, sigma descending, untruncated.
///
/// Rank-deficient inputs leave behind columns that cancel down to rounding
/// noise with arbitrary directions; pairs touching them never pass a relative
/// orthogonality test. Columns whose norm falls below a floor tied to the
/// (rotation-invariant) Frobenius norm of the input are therefore treated as
/// converged, as in dgesvj. The floor sits orders of magnitude below the
/// default rank tolerance, so the surviving triplets are unaffected.
void jacobi_tall(const Matrix& a, Matrix& w, Matrix& v) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    w = a;
    v = Matrix::identity(n);

    double frob_sq = 0.0;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < n; ++j) frob_sq += a(k, j) * a(k, j);
    const double col_floor_sq = frob_sq * std::ldexp(1.0, -100);  // (2^-50 ||a||_F)^2
    const double conv_tol =
        std::sqrt(static_cast<double>(m)) * std::numeric_limits<double>::epsilon();

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double aa = 0.0, bb = 0.0, cc = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    aa += w(k, i) * w(k, i);
                    bb += w(k, j) * w(k, j);
                    cc += w(k, i) * w(k, j);
                }
                if (aa <= col_floor_sq || bb <= col_floor_sq) continue;
                const double scale = std::sqrt(aa) * std::sqrt(bb);
                worst = std::max(worst, std::abs(cc) / scale);
                if (std::abs(cc) <= conv_tol * scale) continue;

                const double zeta = (bb - aa) / (2.0 * cc);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (std::size_t k = 0; k < m; ++k) {
                    const double wi = w(k, i), wj = w(k, j);
                    w(k, i) = cs * wi - sn * wj;
                    w(k, j) = sn * wi + cs * wj;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vi = v(k, i), vj = v(k, j);
                    v(k, i) = cs * vi - sn * vj;
                    v(k, j) = sn * vi + cs * vj;
                }
            }
        }
        if (worst <= conv_tol) return;
    }

    // Recompute the residual for the error report.
    double residual = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double aa = 0.0, bb = 0.0, cc = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                aa += w(k, i) * w(k, i);
                bb += w(k, j) * w(k, j);
                cc += w(k, i) * w(k, j);
            }
            if (aa <= col_floor_sq || bb <= col_floor_sq) continue;
            residual = std::max(residual, std::abs(cc) / (std::sqrt(aa) * std::sqrt(bb)));
        }
    throw NumericalError("SVD did not converge after " + std::to_string(kMaxSweeps) +
                         " sweeps; residual " + std::to_string(residual));
}

SvdDecomposition decompose(const Matrix& a, std::optional<double> rank_tol) {
    if (a.empty()) throw ParseError("SVD requires a nonempty matrix");

    // Work on the taller orientation; swap the factors back afterwards.
    const bool flipped = a.rows() < a.cols();
    const Matrix& tall = flipped ? a.transposed() : a;
    const std::size_t m = tall.rows();
    const std::size_t n = tall.cols();

    Matrix w, v;
    jacobi_tall(tall, w, v);

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += w(k, j) * w(k, j);
        sigma[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    const double sigma_max = n == 0 ? 0.0 : sigma[order[0]];
    const double tol = rank_tol.value_or(
        static_cast<double>(std::max(a.rows(), a.cols())) * sigma_max *
        std::ldexp(1.0, -46));
    std::size_t rank = 0;
    while (rank < n && sigma[order[rank]] > tol) ++rank;

    // Truncated factors of the tall orientation.
    Matrix ut(m, rank), vt_tall(rank, n);
    std::vector<double> sig(rank);
    for (std::size_t r = 0; r < rank; ++r) {
        const std::size_t j = order[r];
        sig[r] = sigma[j];
        for (std::size_t k = 0; k < m; ++k) ut(k, r) = w(k, j) / sigma[j];
        for (std::size_t k = 0; k < n; ++k) vt_tall(r, k) = v(k, j);
    }

    SvdDecomposition dec;
    dec.sigma = std::move(sig);
    dec.numerical_rank = rank;
    dec.rank_tol = tol;
    if (flipped) {
        // a = (tall)^T = (U S Vt)^T, so U and V swap roles.
        dec.u = Matrix(a.rows(), rank);
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t r = 0; r < rank; ++r) dec.u(i, r) = vt_tall(r, i);
        dec.vt = Matrix(rank, a.cols());
        for (std::size_t r = 0; r < rank; ++r)
            for (std::size_t k = 0; k < a.cols(); ++k) dec.vt(r, k) = ut(k, r);
    } else {
        dec.u = std::move(ut);
        dec.vt = std::move(vt_tall);
    }

    // Sign normalization: largest-magnitude entry of each U column positive.
    for (std::size_t r = 0; r < dec.numerical_rank; ++r) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < dec.u.rows(); ++i) {
            const double mag = std::abs(dec.u(i, r));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (dec.u(arg, r) < 0.0) {
            for (std::size_t i = 0; i < dec.u.rows(); ++i) dec.u(i, r) = -dec.u(i, r);
            for (std::size_t k = 0; k < dec.vt.cols(); ++k) dec.vt(r, k) = -dec.vt(r, k);
        }
    }
    return dec;
}

void check_tau(std::size_t got, std::size_t want) {
    if (got != want)
        throw ParseError("target path-duration vector has length " + std::to_string(got) +
                         ", expected " + std::to_string(want));
}

}  // namespace

SvdDecomposition svd(const Matrix& a, std::optional<double> rank_tol) {
    return decompose(a, rank_tol);
}

SvdDecomposition svd(const RouteMatrix& rm, std::optional<double> rank_tol) {
    return decompose(rm.matrix, rank_tol);
}

RelevanceReport relevance(const SvdDecomposition& dec, double score_tol) {
    if (dec.numerical_rank == 0)
        throw ParseError("relevance requires rank >= 1");

    // Width of the leading block of singular values tied with sigma_max.
    const double sigma_max = dec.sigma[0];
    const double tie = 1e-9 * std::max(1.0, sigma_max);
    std::size_t block = 1;
    while (block < dec.numerical_rank && sigma_max - dec.sigma[block] <= tie) ++block;

    RelevanceReport rep;
    rep.dominant_index = 0;
    rep.path_scores.resize(dec.u.rows());
    for (std::size_t i = 0; i < dec.u.rows(); ++i) {
        double s = 0.0;
        for (std::size_t r = 0; r < block; ++r) s += dec.u(i, r) * dec.u(i, r);
        rep.path_scores[i] = std::sqrt(s);
    }
    rep.activity_scores.resize(dec.vt.cols());
    for (std::size_t j = 0; j < dec.vt.cols(); ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < block; ++r) s += dec.vt(r, j) * dec.vt(r, j);
        rep.activity_scores[j] = std::sqrt(s);
    }

    auto top_set = [&](const std::vector<double>& scores) {
        double best = 0.0;
        for (double s : scores) best = std::max(best, s);
        std::vector<std::size_t> top;
        for (std::size_t i = 0; i < scores.size(); ++i)
            if (scores[i] >= best - score_tol) top.push_back(i);
        return top;
    };
    rep.top_paths = top_set(rep.path_scores);
    rep.top_activities = top_set(rep.activity_scores);
    return rep;
}

SpectralExpansion spectral_networks(const SvdDecomposition& dec) {
    SpectralExpansion exp;
    const std::size_t m = dec.u.rows();
    const std::size_t n = dec.vt.cols();
    Matrix running(m, n);
    for (std::size_t r = 0; r < dec.numerical_rank; ++r) {
        Matrix term(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                term(i, j) = dec.sigma[r] * dec.u(i, r) * dec.vt(r, j);
                running(i, j) += term(i, j);
            }
        exp.terms.push_back(std::move(term));
        exp.cumulative.push_back(running);
    }
    return exp;
}

Matrix threshold_reconstruct(const SpectralExpansion& exp, std::size_t k,
                             double threshold) {
    if (k < 1 || k > exp.cumulative.size())
        throw ParseError("spectral order " + std::to_string(k) + " out of range 1.." +
                         std::to_string(exp.cumulative.size()));
    const Matrix& partial = exp.cumulative[k - 1];
    Matrix out(partial.rows(), partial.cols());
    for (std::size_t i = 0; i < partial.rows(); ++i)
        for (std::size_t j = 0; j < partial.cols(); ++j)
            out(i, j) = std::abs(partial(i, j)) >= threshold ? 1.0 : 0.0;
    return out;
}

std::optional<std::size_t> minimal_spectral_order(const SpectralExpansion& exp,
                                                  double threshold) {
    if (exp.cumulative.empty()) return std::nullopt;

    // The final partial sum reconstructs the decomposed 0/1 matrix to high
    // accuracy, so rounding recovers the target exactly.
    const Matrix& full = exp.cumulative.back();
    Matrix target(full.rows(), full.cols());
    for (std::size_t i = 0; i < full.rows(); ++i)
        for (std::size_t j = 0; j < full.cols(); ++j)
            target(i, j) = std::round(full(i, j));

    for (std::size_t k = 1; k <= exp.cumulative.size(); ++k)
        if (threshold_reconstruct(exp, k, threshold) == target) return k;
    return std::nullopt;
}

Matrix pseudoinverse(const Matrix& a, std::optional<double> rank_tol) {
    const SvdDecomposition dec = decompose(a, rank_tol);
    Matrix p(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double s = 0.0;
            for (std::size_t r = 0; r < dec.numerical_rank; ++r)
                s += dec.vt(r, j) * dec.u(i, r) / dec.sigma[r];
            p(j, i) = s;
        }
    return p;
}

Matrix pseudoinverse(const RouteMatrix& rm, std::optional<double> rank_tol) {
    return pseudoinverse(rm.matrix, rank_tol);
}

LeastSquaresDurations least_squares_durations(const RouteMatrix& rm,
                                              std::span<const double> tau) {
    check_tau(tau.size(), rm.matrix.rows());
    LeastSquaresDurations out;
    out.values = pseudoinverse(rm).apply(tau);
    for (double x : out.values)
        if (x < -1e-12) out.has_negative = true;
    return out;
}

Reachability reachability(const Matrix& a, std::span<const double> tau) {
    check_tau(tau.size(), a.rows());
    const SvdDecomposition dec = decompose(a, std::nullopt);

    // Project tau onto the column space: A * pinv(A) = U * U^T.
    std::vector<double> y(dec.numerical_rank, 0.0);
    for (std::size_t r = 0; r < dec.numerical_rank; ++r)
        for (std::size_t i = 0; i < a.rows(); ++i) y[r] += dec.u(i, r) * tau[i];
    double residual_sq = 0.0;
    double tau_sq = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double proj = 0.0;
        for (std::size_t r = 0; r < dec.numerical_rank; ++r) proj += dec.u(i, r) * y[r];
        residual_sq += (proj - tau[i]) * (proj - tau[i]);
        tau_sq += tau[i] * tau[i];
    }

    Reachability out;
    out.residual = std::sqrt(residual_sq);
    out.reachable = out.residual <= 1e-9 * std::max(1.0, std::sqrt(tau_sq));
    return out;
}

Reachability reachability(const RouteMatrix& rm, std::span<const double> tau) {
    return reachability(rm.matrix, tau);
}

}  // namespace routespec
