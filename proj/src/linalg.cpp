#include "isokl/linalg.hpp"

#include <Eigen/SVD>

namespace isokl {

Subspace orthonormal_basis(const Mat& m, const Tolerance& tol) {
    if (m.size() == 0) throw Error("ZeroMatrix", "empty input");
    if (!all_finite(m)) throw Error("NotFinite", "input has NaN/Inf entries");
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    double cutoff = tol.abs_tol + tol.rel_tol * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    if (r == 0) throw Error("ZeroMatrix", "all singular values below cutoff");
    Subspace s;
    s.ambient_dim = m.rows();
    s.basis = svd.matrixU().leftCols(r);
    return s;
}

Mat projection_from_subspace(const Subspace& s) {
    return s.basis * s.basis.adjoint();
}

PolarFactors polar_decompose(const Mat& a, const Tolerance& tol) {
    if (!all_finite(a)) throw Error("NotFinite", "input has NaN/Inf entries");
    PolarFactors f;
    if (a.size() == 0 || a.isZero(0.0)) {
        f.isometry = Mat::Zero(a.rows(), a.cols());
        f.positive_part = Mat::Zero(a.cols(), a.cols());
        return f;
    }
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double cutoff = tol.abs_tol + tol.rel_tol * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    Mat u = svd.matrixU().leftCols(r);
    Mat w = svd.matrixV().leftCols(r);
    f.isometry = u * w.adjoint();
    f.positive_part = svd.matrixV() * sv.asDiagonal() * svd.matrixV().adjoint();
    return f;
}

PartialIsometryCheck is_partial_isometry(const Mat& v, const Tolerance& tol) {
    if (v.rows() != v.cols())
        throw Error("DimensionMismatch", "is_partial_isometry expects a square matrix");
    PartialIsometryCheck c;
    c.initial = v.adjoint() * v;
    c.final = v * v.adjoint();
    double thr = tol.threshold(1.0);
    c.verdict = spectral_norm(c.initial * c.initial - c.initial) <= thr;
    return c;
}

Mat extend_to_unitary(const Mat& b, const Mat& p_c, const Tolerance& tol) {
    if (b.rows() != b.cols() || b.rows() != p_c.rows() || p_c.rows() != p_c.cols())
        throw Error("DimensionMismatch", "extend_to_unitary expects matching square matrices");
    double thr = tol.threshold(1.0);
    if (spectral_norm(b.adjoint() * b - p_c) > thr ||
        spectral_norm(b * b.adjoint() - p_c) > thr)
        throw Error("NotCompatible",
                    "initial/final projections of b differ from p_c beyond tolerance");
    Mat id = Mat::Identity(b.rows(), b.cols());
    return b + (id - p_c);
}

}  // namespace isokl
