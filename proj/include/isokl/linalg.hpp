#pragma once

#include "isokl/types.hpp"

namespace isokl {

/// k-dimensional subspace of C^ambient_dim, stored as an ambient_dim x k
/// matrix with orthonormal columns.
struct Subspace {
    Eigen::Index ambient_dim = 0;
    Mat basis;  // ambient_dim x k

    Eigen::Index dim() const { return basis.cols(); }
};

/// A = isometry * positive_part with isometry a partial isometry and
/// positive_part Hermitian PSD.
struct PolarFactors {
    Mat isometry;
    Mat positive_part;
};

struct PartialIsometryCheck {
    bool verdict = false;
    Mat initial;  // v^H v
    Mat final;    // v v^H
};

/// Orthonormal basis of the column space of m, rank cut at singular values
/// <= abs_tol + rel_tol * sigma_max. Throws Error("ZeroMatrix") when all
/// singular values fall below the cutoff.
Subspace orthonormal_basis(const Mat& m, const Tolerance& tol);

/// P = basis * basis^H.
Mat projection_from_subspace(const Subspace& s);

/// SVD-based polar decomposition A = V |A|, with V truncated to the
/// numerical rank of A (so the initial projection of V is the support
/// projection of |A|). The zero matrix maps to zero factors.
PolarFactors polar_decompose(const Mat& a, const Tolerance& tol);

PartialIsometryCheck is_partial_isometry(const Mat& v, const Tolerance& tol);

/// For a partial isometry b with initial = final = p_c, returns the unitary
/// U = b + (I - p_c), which commutes with p_c and satisfies U p_c = b.
/// Throws Error("NotCompatible") when b's projections differ from p_c.
Mat extend_to_unitary(const Mat& b, const Mat& p_c, const Tolerance& tol);

}  // namespace isokl
