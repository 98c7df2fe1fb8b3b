#include "isokl/types.hpp"

#include <Eigen/SVD>

namespace isokl {

double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Mat dagger(const Mat& m) { return m.adjoint(); }

bool all_finite(const Mat& m) { return m.allFinite(); }

bool is_hermitian(const Mat& m, double thr) {
    if (m.rows() != m.cols()) return false;
    return spectral_norm(m - m.adjoint()) <= thr;
}

bool is_projection(const Mat& p, double thr) {
    if (p.rows() != p.cols()) return false;
    return is_hermitian(p, thr) && spectral_norm(p * p - p) <= thr;
}

bool is_unitary(const Mat& u, double thr) {
    if (u.rows() != u.cols()) return false;
    Mat id = Mat::Identity(u.rows(), u.cols());
    return spectral_norm(u.adjoint() * u - id) <= thr;
}

int numerical_rank(const Mat& m, const Tolerance& tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& sv = svd.singularValues();
    double cutoff = tol.abs_tol + tol.rel_tol * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return r;
}

}  // namespace isokl
