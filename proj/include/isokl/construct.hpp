#pragma once

#include <vector>

#include "isokl/types.hpp"

namespace isokl {

/// Pairwise anti-commuting Hermitian unitary m x m matrices, entries exact
/// in {0, +-1, +-i}. Member count is 2q+1 where m = 2^q * p with p odd.
struct AntiCommutingFamily {
    Eigen::Index m = 0;
    std::vector<Mat> members;
};

/// Unitaries of order d with A_i A_j = omega * A_j A_i for i < j, where
/// omega = exp(2*pi*i/d).
struct OmegaFamily {
    int d = 0;
    Eigen::Index dim = 0;
    std::vector<Mat> members;
    Complex omega;
};

/// Maximal anti-commuting Hermitian unitary set from the Pauli tensor
/// induction. Throws Error("OddDimension") for odd m.
AntiCommutingFamily kestelman_family(Eigen::Index m);

/// Projection onto the graph subspace {(x, Ax, ..., A^{d-1}x)} in d x d
/// block form, block (i,j) = (1/d) A^{i-j} with negative powers as adjoints.
Mat graph_projection(const Mat& a, int d, const Tolerance& tol);

/// Partial isometry V_A with V_A^H V_A = P_infinity and V_A V_A^H = P_A:
/// last block column holds (1/sqrt(d)) A^j.
Mat graph_partial_isometry(const Mat& a, int d, const Tolerance& tol);

/// Projection with the identity in the last diagonal block.
Mat p_infinity(Eigen::Index dim_h, int d);

/// The d projections P_{(omega^r A)}, r = 0..d-1; they sum to I and have
/// mutually orthogonal ranges.
std::vector<Mat> omega_rotated_family(const Mat& a, int d, const Tolerance& tol);

/// Clock/shift base plus tensor induction; invariants re-checked at
/// construction (a failure aborts with Error("HypothesisViolation")).
OmegaFamily omega_commuting_generators(int d, int n);

/// U_{(A,r,B,s)} = (1/sqrt(d)) sum_j omega^{(s-r)j} (A^H)^j B^j.
Mat crossing_unitary(const Mat& a, int r, const Mat& b, int s, int d, const Tolerance& tol);

Mat clock_matrix(int d);
Mat shift_matrix(int d);

}  // namespace isokl
