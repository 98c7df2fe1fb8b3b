#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isokl/linalg.hpp"

namespace isokl {

/// d-outcome projective measurement: orthogonal projections with mutually
/// orthogonal ranges summing to the identity.
struct Measurement {
    int d = 0;
    Eigen::Index dim = 0;
    std::vector<Mat> effects;
};

struct MUMFamily {
    std::vector<Measurement> measurements;
    int common_rank = 0;
    double max_residual = 0.0;
};

/// Block operators of a 2-element MUM in canonical coordinates on
/// C^k (x) C^d: P_a = I_k (x) |a><a| and Q_b = (1/d) sum_ij V^b_ij (x) |i><j|.
struct CanonicalForm {
    int k = 0;
    int d = 0;
    std::vector<std::vector<std::vector<Mat>>> blocks;  // blocks[b][i][j], k x k
    Mat basis_change;                                   // the unitary U
};

struct RelationsReport {
    bool verdict = false;
    double diagonal_residual = 0.0;   // V^b_ii = I_k
    double adjoint_residual = 0.0;    // (V^b_ij)^H = V^b_ji
    double chain_residual = 0.0;      // V^b_{i1 i2} = V^b_{i1 j} V^b_{j i2}
    double sum_residual = 0.0;        // sum_b V^b_ij = delta_ij d I_k
};

struct MUMKLReport {
    bool verdict = false;
    std::vector<std::vector<Mat>> unitaries;
    Eigen::MatrixXd residuals;
};

struct MeasurementFailure {
    std::string reason;
    int index_a = -1, index_b = -1;
    double residual = 0.0;
};

std::optional<Measurement> measurement_check(const std::vector<Mat>& effects, const Tolerance& tol,
                                             MeasurementFailure* failure = nullptr);

/// Verifies P_a = d P_a Q_b P_a (and symmetrically) for every cross pair
/// across every pair of measurements.
std::optional<MUMFamily> mum_check(const std::vector<Measurement>& family, const Tolerance& tol,
                                   MeasurementFailure* failure = nullptr);

/// Builds an n-element family of d-outcome MUMs: omega-commuting generators,
/// then their rotated graph projection families, validated via mum_check.
MUMFamily mum_from_construction(int d, int n);

/// KL-style check with the scalar pinned to 1/sqrt(d).
MUMKLReport mum_kl_check(const std::vector<Mat>& vs, const std::vector<Mat>& ws, const Mat& p_c,
                         const Tolerance& tol);

/// Canonical-form extraction for a 2-element MUM (anchor: first effect of
/// the first measurement). Throws Error("RelationViolated") when the
/// extracted blocks fail the canonical relations.
CanonicalForm canonical_form_extract(const MUMFamily& family, const Tolerance& tol);

RelationsReport canonical_relations_check(const CanonicalForm& cf, const Tolerance& tol);

/// Rebuild the two measurements from a canonical form (inverse of the
/// extraction up to gauge).
std::pair<Measurement, Measurement> canonical_form_rebuild(const CanonicalForm& cf);

}  // namespace isokl
