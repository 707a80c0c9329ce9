#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "routespec/matrix.hpp"
#include "routespec/paths.hpp"

namespace routespec {

/**
 * Truncated singular value decomposition A = U * diag(sigma) * Vt.
 *
 * Only triplets with sigma above rank_tol are kept, so sigma.size() equals
 * numerical_rank. Columns of U and rows of Vt are orthonormal; sigma is
 * descending. Signs are normalized: in each column of U the entry of largest
 * magnitude is positive (ties: lowest row index wins), with the matching Vt
 * row flipped alongside.
 */
struct SvdDecomposition {
    Matrix u;                    // rows x rank
    std::vector<double> sigma;   // rank values, descending
    Matrix vt;                   // rank x cols
    std::size_t numerical_rank = 0;
    double rank_tol = 0.0;
};

/// One-sided Jacobi SVD. rank_tol defaults to
/// max(rows, cols) * sigma_max * 2^-46. Throws NumericalError with the
/// achieved residual if the sweeps fail to converge and ParseError on an
/// empty matrix.
SvdDecomposition svd(const Matrix& a, std::optional<double> rank_tol = std::nullopt);
SvdDecomposition svd(const RouteMatrix& rm, std::optional<double> rank_tol = std::nullopt);

/// Relevance read off the dominant singular triplet.
struct RelevanceReport {
    std::size_t dominant_index = 0;          // position of the largest sigma
    std::vector<double> path_scores;         // one per route-matrix row, in [0, 1]
    std::vector<double> activity_scores;     // one per activity column, in [0, 1]
    std::vector<std::size_t> top_paths;      // rows within score_tol of the max
    std::vector<std::size_t> top_activities; // columns within score_tol of the max
};

/**
 * Scores paths and activities by the dominant singular direction: the
 * absolute entries of the first column of U and first row of Vt. When the
 * leading singular value is degenerate (tied within 1e-9 * max(1, sigma_max)),
 * the scores aggregate the whole tied block by root-sum-square, which keeps
 * the ranking invariant under the basis ambiguity of repeated singular
 * values. Throws ParseError when the rank is zero.
 */
RelevanceReport relevance(const SvdDecomposition& dec, double score_tol = 1e-6);

/// Rank-1 expansion terms G_i = sigma_i * u_i * v_i and their partial sums;
/// the last partial sum reconstructs the decomposed matrix.
struct SpectralExpansion {
    std::vector<Matrix> terms;
    std::vector<Matrix> cumulative;
};

SpectralExpansion spectral_networks(const SvdDecomposition& dec);

/// 0/1 matrix with 1 where |cumulative[k-1]| >= threshold. Throws ParseError
/// unless 1 <= k <= rank.
Matrix threshold_reconstruct(const SpectralExpansion& exp, std::size_t k,
                             double threshold);

/// Smallest k whose thresholded partial sum reproduces the full matrix
/// (rounded from the final partial sum); nullopt when no k <= rank works.
std::optional<std::size_t> minimal_spectral_order(const SpectralExpansion& exp,
                                                  double threshold);

/// Moore-Penrose pseudoinverse (cols x rows), from the truncated SVD.
Matrix pseudoinverse(const Matrix& a, std::optional<double> rank_tol = std::nullopt);
Matrix pseudoinverse(const RouteMatrix& rm, std::optional<double> rank_tol = std::nullopt);

/// Minimum-norm least-squares durations t = pinv(R) * tau.
struct LeastSquaresDurations {
    std::vector<double> values;
    bool has_negative = false;  // negative entries are not schedulable
};

LeastSquaresDurations least_squares_durations(const RouteMatrix& rm,
                                              std::span<const double> tau);

/// Whether tau lies in the column space of the matrix.
struct Reachability {
    bool reachable = false;
    double residual = 0.0;  // |A * pinv(A) * tau - tau|_2
};

/// Reachable iff the residual of projecting tau onto the column space is at
/// most 1e-9 * max(1, |tau|_2). Throws ParseError on length mismatch.
Reachability reachability(const Matrix& a, std::span<const double> tau);
Reachability reachability(const RouteMatrix& rm, std::span<const double> tau);

}  // namespace routespec
