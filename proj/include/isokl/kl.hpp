#pragma once

#include <optional>
#include <vector>

#include "isokl/isoclinic.hpp"
#include "isokl/linalg.hpp"

namespace isokl {

/// Witness for the generalized Knill-Laflamme conditions
/// P_C A_i^H A_j P_C = lambda_ij U_ij P_C with U_ij unitary and commuting
/// with P_C. Gauge: lambda_ij is real nonnegative, with the phase folded
/// into U_ij; diagonal entries carry U_ii = I.
struct KLWitness {
    int n = 0;
    Mat lambdas;                          // n x n, real nonnegative by gauge
    std::vector<std::vector<Mat>> unitaries;  // full ambient dimension
    Eigen::MatrixXd residuals;
    Mat code_projection;

    double max_residual() const { return residuals.maxCoeff(); }
};

/// Partial isometries V_i with common initial projection P_C and final
/// projections P_i = V_i V_i^H.
struct AnchorFamily {
    Mat anchor_projection;
    std::vector<Mat> intertwiners;
    std::vector<Mat> range_projections;
};

struct KLClassicResult {
    Mat lambda_matrix;  // n x n complex, a density matrix when the check passes
    bool is_positive = false;
    Complex trace;
    double residual = 0.0;
};

struct ConditionFailure {
    int i = -1, j = -1;
    double residual = 0.0;
};

struct RoundtripResult {
    bool kl_holds = false;
    bool isoclinic_holds = false;
    bool consistent = false;
};

/// Classic KL check: every P_C E_i^H E_j P_C must be a scalar multiple of
/// P_C. On failure returns nullopt and reports the first failing pair via
/// `failure` when non-null.
std::optional<KLClassicResult> kl_classic_check(const std::vector<Mat>& errors, const Mat& p_c,
                                                const Tolerance& tol,
                                                ConditionFailure* failure = nullptr);

/// Generalized KL check: every sandwich must equal lambda * U * P_C for a
/// unitary U commuting with P_C. Fails when the singular values of the
/// code-space compression are unequal.
std::optional<KLWitness> kl_general_check(const std::vector<Mat>& ops, const Mat& p_c,
                                          const Tolerance& tol,
                                          ConditionFailure* failure = nullptr);

/// Range projections of the operators A_i P_C (zero matrix when A_i
/// annihilates the code).
std::vector<Mat> range_projections(const std::vector<Mat>& ops, const Mat& p_c,
                                   const Tolerance& tol);

/// Build intertwining partial isometries from an equal-rank projection
/// family onto the chosen anchor.
AnchorFamily intertwiners_from_family(const std::vector<Mat>& ps, int anchor_index,
                                      const Tolerance& tol);

/// Converse construction: extract the KL witness (gammas and commuting
/// unitaries) from an isoclinic anchor family.
KLWitness witness_from_isoclinic(const AnchorFamily& family, const Tolerance& tol);

/// Both directions of the equivalence between the generalized KL conditions
/// and isoclinicity of the range projections.
RoundtripResult kl_isoclinic_roundtrip(const std::vector<Mat>& ops, const Mat& p_c,
                                    const Tolerance& tol);

}  // namespace isokl
