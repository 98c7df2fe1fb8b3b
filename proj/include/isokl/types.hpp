#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace isokl {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Absolute/relative tolerance pair. A residual r passes against a reference
/// operator of spectral norm s iff r <= abs_tol + rel_tol * s.
struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;

    double threshold(double ref_norm = 1.0) const {
        return abs_tol + rel_tol * ref_norm;
    }
};

/// Library-wide error type. `kind` is a stable machine-readable tag
/// (e.g. "NotProjection", "RankMismatch") used by tests and the CLI.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}

    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

/// Largest singular value.
double spectral_norm(const Mat& m);

Mat kron(const Mat& a, const Mat& b);

Mat dagger(const Mat& m);

bool all_finite(const Mat& m);

bool is_hermitian(const Mat& m, double thr);

/// Hermitian + idempotent within thr.
bool is_projection(const Mat& p, double thr);

bool is_unitary(const Mat& u, double thr);

/// Numerical rank with cutoff abs_tol + rel_tol * sigma_max.
int numerical_rank(const Mat& m, const Tolerance& tol);

}  // namespace isokl
