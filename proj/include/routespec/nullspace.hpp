#pragma once

#include <cstddef>
#include <vector>

#include "routespec/matrix.hpp"
#include "routespec/paths.hpp"
#include "routespec/svd.hpp"

namespace routespec {

/**
 * Exact integer basis of the nullspace of an integer matrix.
 *
 * Every vector satisfies R*v = 0 in exact arithmetic, is scaled to smallest
 * integer form (entries coprime), and is sign-normalized so its first nonzero
 * entry is negative. Vectors are ordered by their free column, ascending.
 * dimension + exact_rank = column count (rank-nullity).
 */
struct NullspaceBasis {
    std::vector<std::vector<long long>> vectors;
    std::size_t dimension = 0;   // == vectors.size()
    std::size_t exact_rank = 0;  // rank from the exact elimination
};

/// Fraction-free Gauss-Jordan elimination over 64-bit integers. Entries must
/// be integers (ParseError otherwise); overflow during elimination raises
/// NumericalError instead of wrapping.
NullspaceBasis nullspace_basis(const Matrix& a);
NullspaceBasis nullspace_basis(const RouteMatrix& rm);

/// Rank of an integer matrix by the same exact elimination.
std::size_t exact_integer_rank(const Matrix& a);

/// Alternative nullspace: orthonormal vectors completing the SVD's row-space
/// basis, found by projecting standard basis vectors. Spans the same space as
/// nullspace_basis up to the decomposition's accuracy.
std::vector<std::vector<double>> nullspace_from_svd(const SvdDecomposition& dec);

}  // namespace routespec
