#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "isokl/linalg.hpp"

namespace isokl {

/// Canonical angles between two subspaces, sorted nondecreasing in [0, pi/2].
struct AngleSpectrum {
    std::vector<double> angles;
};

/// Certificate that a subspace pair is isoclinic: P_V P_W P_V = lambda P_V
/// and symmetrically, with lambda = cos^2(angle).
struct IsoclinicCertificate {
    double lambda = 0.0;
    double angle = 0.0;
    double residual = 0.0;
};

struct FamilyCheckResult {
    bool verdict = false;
    Eigen::MatrixXd lambda_matrix;
    double worst_residual = 0.0;
    std::vector<std::pair<int, int>> failing_pairs;
};

/// arccos of the singular values of basis_v^H basis_w (Bjorck-Golub).
AngleSpectrum canonical_angles(const Subspace& v, const Subspace& w, const Tolerance& tol);

/// Independent route: angles from the eigenvalues of P_V P_W P_V restricted
/// to range(P_V). Cross-checks canonical_angles.
AngleSpectrum angles_via_eigen_oracle(const Mat& pv, const Mat& pw, const Tolerance& tol);

std::optional<IsoclinicCertificate> isoclinic_pair_check(const Mat& pv, const Mat& pw,
                                                         const Tolerance& tol);

FamilyCheckResult isoclinic_family_check(const std::vector<Mat>& ps, const Tolerance& tol);

}  // namespace isokl
