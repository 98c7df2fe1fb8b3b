#include "isokl/kl.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace isokl {

namespace {

void require_projection(const Mat& p, double thr, const char* name) {
    if (!is_projection(p, thr))
        throw Error("NotProjection", std::string(name) + " is not a projection within tolerance");
}

int projection_rank(const Mat& p) {
    return static_cast<int>(std::lround(p.trace().real()));
}

// Decide whether the code-space compression mr (k x k) equals
// lambda * unitary with lambda >= 0. Returns false and sets `spread`
// when the singular values are unequal beyond thr.
struct ScalarUnitary {
    bool ok = false;
    double lambda = 0.0;
    Mat unitary;  // k x k, only meaningful when lambda > 0
    double spread = 0.0;
};

ScalarUnitary scalar_times_unitary(const Mat& mr, double thr) {
    ScalarUnitary r;
    Eigen::JacobiSVD<Mat> svd(mr, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    r.spread = sv(0) - sv(sv.size() - 1);
    if (sv(0) <= thr) {
        r.ok = true;
        r.lambda = 0.0;
        r.unitary = Mat::Identity(mr.rows(), mr.cols());
        return r;
    }
    if (r.spread > thr) return r;
    r.ok = true;
    r.lambda = sv.mean();
    r.unitary = svd.matrixU() * svd.matrixV().adjoint();
    return r;
}

}  // namespace

std::optional<KLClassicResult> kl_classic_check(const std::vector<Mat>& errors, const Mat& p_c,
                                                const Tolerance& tol, ConditionFailure* failure) {
    double thr = tol.threshold(1.0);
    require_projection(p_c, thr, "p_c");
    int n = static_cast<int>(errors.size());
    int k = projection_rank(p_c);
    if (k == 0) throw Error("NotProjection", "code projection has rank zero");
    KLClassicResult out;
    out.lambda_matrix = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Mat m = p_c * errors[i].adjoint() * errors[j] * p_c;
            Complex lam = m.trace() / static_cast<double>(k);
            double r = spectral_norm(m - lam * p_c);
            if (r > tol.threshold(std::max(1.0, spectral_norm(m)))) {
                if (failure) *failure = {i, j, r};
                return std::nullopt;
            }
            out.lambda_matrix(i, j) = lam;
            out.residual = std::max(out.residual, r);
        }
    }
    Mat herm = 0.5 * (out.lambda_matrix + out.lambda_matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(herm);
    out.is_positive = es.eigenvalues().minCoeff() >= -tol.abs_tol;
    out.trace = out.lambda_matrix.trace();
    return out;
}

std::optional<KLWitness> kl_general_check(const std::vector<Mat>& ops, const Mat& p_c,
                                          const Tolerance& tol, ConditionFailure* failure) {
    double thr = tol.threshold(1.0);
    require_projection(p_c, thr, "p_c");
    int n = static_cast<int>(ops.size());
    Subspace code = orthonormal_basis(p_c, tol);
    const Mat& q = code.basis;
    Eigen::Index k = code.dim();
    Mat id = Mat::Identity(p_c.rows(), p_c.cols());

    KLWitness w;
    w.n = n;
    w.lambdas = Mat::Zero(n, n);
    w.residuals = Eigen::MatrixXd::Zero(n, n);
    w.code_projection = p_c;
    w.unitaries.assign(n, std::vector<Mat>(n));

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Mat m = p_c * ops[i].adjoint() * ops[j] * p_c;
            Mat mr = q.adjoint() * m * q;
            double pair_thr = tol.threshold(std::max(1.0, spectral_norm(mr)));
            if (i == j) {
                // Diagonal gauge: U_ii = I, lambda_ii >= 0.
                double lam = mr.trace().real() / static_cast<double>(k);
                double r = spectral_norm(m - lam * p_c);
                if (lam < -pair_thr || r > pair_thr) {
                    if (failure) *failure = {i, j, r};
                    return std::nullopt;
                }
                w.lambdas(i, i) = std::max(lam, 0.0);
                w.unitaries[i][i] = id;
                w.residuals(i, i) = r;
                continue;
            }
            ScalarUnitary su = scalar_times_unitary(mr, pair_thr);
            if (!su.ok) {
                if (failure) *failure = {i, j, su.spread};
                return std::nullopt;
            }
            Mat u;
            if (su.lambda > 0.0) {
                Mat b = q * su.unitary * q.adjoint();
                u = extend_to_unitary(b, p_c, tol);
            } else {
                u = id;
            }
            w.lambdas(i, j) = su.lambda;
            w.unitaries[i][j] = u;
            w.residuals(i, j) = spectral_norm(m - su.lambda * u * p_c);
        }
    }
    // Consistency (not assumed): lambda_ii = 0 forces row and column i to zero.
    for (int i = 0; i < n; ++i) {
        if (w.lambdas(i, i).real() > thr) continue;
        for (int j = 0; j < n; ++j) {
            double off = std::max(std::abs(w.lambdas(i, j)), std::abs(w.lambdas(j, i)));
            if (off > thr) {
                if (failure) *failure = {i, j, off};
                return std::nullopt;
            }
        }
    }
    return w;
}

std::vector<Mat> range_projections(const std::vector<Mat>& ops, const Mat& p_c,
                                   const Tolerance& tol) {
    double thr = tol.threshold(1.0);
    require_projection(p_c, thr, "p_c");
    std::vector<Mat> out;
    out.reserve(ops.size());
    for (const Mat& a : ops) {
        Mat m = a * p_c;
        if (spectral_norm(m) <= thr) {
            out.push_back(Mat::Zero(p_c.rows(), p_c.cols()));
            continue;
        }
        out.push_back(projection_from_subspace(orthonormal_basis(m, tol)));
    }
    return out;
}

AnchorFamily intertwiners_from_family(const std::vector<Mat>& ps, int anchor_index,
                                      const Tolerance& tol) {
    if (anchor_index < 0 || anchor_index >= static_cast<int>(ps.size()))
        throw Error("RankMismatch", "anchor index out of range");
    double thr = tol.threshold(1.0);
    int rank0 = -1;
    for (const Mat& p : ps) {
        require_projection(p, thr, "family member");
        int r = projection_rank(p);
        if (rank0 < 0) rank0 = r;
        else if (r != rank0) throw Error("RankMismatch", "family members have unequal rank");
    }
    AnchorFamily fam;
    fam.anchor_projection = ps[anchor_index];
    const Mat& pc = fam.anchor_projection;
    Subspace anchor_basis = orthonormal_basis(pc, tol);
    for (int i = 0; i < static_cast<int>(ps.size()); ++i) {
        fam.range_projections.push_back(ps[i]);
        if (i == anchor_index) {
            fam.intertwiners.push_back(pc);
            continue;
        }
        double overlap = (ps[i] * pc).trace().real();
        if (overlap > tol.abs_tol * rank0) {
            PolarFactors pf = polar_decompose(ps[i] * pc, tol);
            fam.intertwiners.push_back(pf.isometry);
        } else {
            // Orthogonal member: map an orthonormal basis of the anchor range
            // onto one of the member range (SVD bases, index order).
            Subspace member_basis = orthonormal_basis(ps[i], tol);
            fam.intertwiners.push_back(member_basis.basis * anchor_basis.basis.adjoint());
        }
    }
    return fam;
}

KLWitness witness_from_isoclinic(const AnchorFamily& family, const Tolerance& tol) {
    double thr = tol.threshold(1.0);
    const Mat& pc = family.anchor_projection;
    int n = static_cast<int>(family.intertwiners.size());
    int k = projection_rank(pc);
    Mat id = Mat::Identity(pc.rows(), pc.cols());

    for (int i = 0; i < n; ++i) {
        const Mat& v = family.intertwiners[i];
        if (spectral_norm(v.adjoint() * v - pc) > thr)
            throw Error("IsoclinicViolation",
                        "intertwiner " + std::to_string(i) + " has wrong initial projection");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Mat &pi = family.range_projections[i], &pj = family.range_projections[j];
            double lam = (pi * pj).trace().real() / static_cast<double>(k);
            double r = spectral_norm(pi * pj * pi - lam * pi);
            if (r > thr)
                throw Error("IsoclinicViolation", "pair (" + std::to_string(i) + "," +
                                                      std::to_string(j) +
                                                      ") violates the projection equation, "
                                                      "residual " +
                                                      std::to_string(r));
        }
    }

    KLWitness w;
    w.n = n;
    w.lambdas = Mat::Zero(n, n);
    w.residuals = Eigen::MatrixXd::Zero(n, n);
    w.code_projection = pc;
    w.unitaries.assign(n, std::vector<Mat>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Mat &pi = family.range_projections[i], &pj = family.range_projections[j];
            double gamma =
                std::sqrt(std::max(0.0, (pi * pj).trace().real() / static_cast<double>(k)));
            Mat sandwich = pc * family.intertwiners[i].adjoint() * family.intertwiners[j] * pc;
            Mat u;
            if (gamma > thr && i != j) {
                Mat b = sandwich / gamma;
                u = extend_to_unitary(b, pc, tol);
            } else {
                u = id;
            }
            w.lambdas(i, j) = gamma;
            w.unitaries[i][j] = u;
            w.residuals(i, j) = spectral_norm(sandwich - gamma * u * pc);
        }
    }
    return w;
}

RoundtripResult kl_isoclinic_roundtrip(const std::vector<Mat>& ops, const Mat& p_c,
                                    const Tolerance& tol) {
    double thr = tol.threshold(1.0);
    require_projection(p_c, thr, "p_c");
    Subspace code = orthonormal_basis(p_c, tol);
    const Mat& q = code.basis;
    for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
        Mat mr = q.adjoint() * ops[i].adjoint() * ops[i] * q;
        double lam = mr.trace().real() / static_cast<double>(code.dim());
        double scale_thr = tol.threshold(std::max(1.0, spectral_norm(mr)));
        if (spectral_norm(mr - lam * Mat::Identity(mr.rows(), mr.cols())) > scale_thr)
            throw Error("NotScaledIsometry",
                        "op " + std::to_string(i) +
                            " is not a scalar multiple of a partial isometry on the code");
    }
    RoundtripResult out;
    out.kl_holds = kl_general_check(ops, p_c, tol).has_value();
    std::vector<Mat> projs;
    for (const Mat& p : range_projections(ops, p_c, tol))
        if (spectral_norm(p) > thr) projs.push_back(p);
    if (projs.size() < 2) {
        out.isoclinic_holds = true;
    } else {
        out.isoclinic_holds = isoclinic_family_check(projs, tol).verdict;
    }
    out.consistent = out.kl_holds == out.isoclinic_holds;
    return out;
}

}  // namespace isokl
