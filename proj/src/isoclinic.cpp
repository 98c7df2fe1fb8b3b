#include "isokl/isoclinic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace isokl {

namespace {

void require_projection(const Mat& p, double thr, const char* name) {
    if (!is_projection(p, thr))
        throw Error("NotProjection", std::string(name) + " is not a projection within tolerance");
}

int projection_rank(const Mat& p) {
    // Trace of a projection is its rank.
    return static_cast<int>(std::lround(p.trace().real()));
}

}  // namespace

namespace {

// Combine a cosine list (descending) with a sine list (ascending): acos is
// ill-conditioned near angle 0, asin near pi/2, so each angle is taken from
// whichever parametrization is well-conditioned for it (Bjorck-Golub).
std::vector<double> combine_cos_sin(const std::vector<double>& cosines,
                                    const std::vector<double>& sines) {
    std::vector<double> out;
    out.reserve(cosines.size());
    for (size_t t = 0; t < cosines.size(); ++t) {
        double c = std::clamp(cosines[t], 0.0, 1.0);
        if (c * c >= 0.5 && t < sines.size())
            out.push_back(std::asin(std::clamp(sines[t], 0.0, 1.0)));
        else
            out.push_back(std::acos(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

AngleSpectrum canonical_angles(const Subspace& v, const Subspace& w, const Tolerance&) {
    if (v.ambient_dim != w.ambient_dim)
        throw Error("DimensionMismatch", "subspaces live in different ambient dimensions");
    Mat overlap = v.basis.adjoint() * w.basis;
    Eigen::JacobiSVD<Mat> svd(overlap);
    const auto& sv = svd.singularValues();
    Eigen::Index k = std::min(v.dim(), w.dim());
    std::vector<double> cosines(k, 0.0);
    for (Eigen::Index i = 0; i < k && i < sv.size(); ++i) cosines[i] = sv(i);

    // Sines from the residual of w against v; the k smallest are the sines
    // of the principal angles.
    Mat residual = w.basis - v.basis * overlap;
    Eigen::JacobiSVD<Mat> svd_s(residual);
    std::vector<double> sines(svd_s.singularValues().data(),
                              svd_s.singularValues().data() + svd_s.singularValues().size());
    std::sort(sines.begin(), sines.end());
    sines.resize(std::min<size_t>(sines.size(), k));

    AngleSpectrum out;
    out.angles = combine_cos_sin(cosines, sines);
    return out;
}

AngleSpectrum angles_via_eigen_oracle(const Mat& pv, const Mat& pw, const Tolerance& tol) {
    double thr = tol.threshold(1.0);
    require_projection(pv, thr, "pv");
    require_projection(pw, thr, "pw");
    int kv = projection_rank(pv);
    int kw = projection_rank(pw);
    if (kv != kw) throw Error("RankMismatch", "projections have unequal rank");
    if (kv == 0) return {};
    Subspace sv = orthonormal_basis(pv, tol);
    // Compress P_V P_W P_V to range(P_V); its eigenvalues there are cos^2 of the angles.
    Mat compressed = sv.basis.adjoint() * pw * sv.basis;
    Eigen::SelfAdjointEigenSolver<Mat> es(compressed);
    std::vector<double> cosines;  // descending
    for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;)
        cosines.push_back(std::sqrt(std::clamp(es.eigenvalues()(i), 0.0, 1.0)));

    // Small angles from sines: singular values of (I - P_W) restricted to
    // range(P_V), ascending.
    Mat rejected = sv.basis - pw * sv.basis;
    Eigen::JacobiSVD<Mat> svd_s(rejected);
    std::vector<double> sines(svd_s.singularValues().data(),
                              svd_s.singularValues().data() + svd_s.singularValues().size());
    std::sort(sines.begin(), sines.end());

    AngleSpectrum out;
    out.angles = combine_cos_sin(cosines, sines);
    return out;
}

std::optional<IsoclinicCertificate> isoclinic_pair_check(const Mat& pv, const Mat& pw,
                                                         const Tolerance& tol) {
    double thr = tol.threshold(1.0);
    require_projection(pv, thr, "pv");
    require_projection(pw, thr, "pw");
    int kv = projection_rank(pv);
    int kw = projection_rank(pw);
    if (kv != kw) throw Error("RankMismatch", "projections have unequal rank");
    if (kv == 0) throw Error("RankMismatch", "zero-rank projections");

    Mat pvw = pv * pw * pv;
    double lambda = pvw.trace().real() / pv.trace().real();
    lambda = std::clamp(lambda, 0.0, 1.0);
    double r1 = spectral_norm(pvw - lambda * pv);
    double r2 = spectral_norm(pw * pv * pw - lambda * pw);
    double residual = std::max(r1, r2);
    if (residual > thr) return std::nullopt;
    IsoclinicCertificate cert;
    cert.lambda = lambda;
    cert.angle = std::acos(std::sqrt(lambda));
    cert.residual = residual;
    return cert;
}

FamilyCheckResult isoclinic_family_check(const std::vector<Mat>& ps, const Tolerance& tol) {
    if (ps.size() < 2) throw Error("RankMismatch", "need at least two projections");
    double thr = tol.threshold(1.0);
    int n = static_cast<int>(ps.size());
    int rank0 = -1;
    for (int i = 0; i < n; ++i) {
        require_projection(ps[i], thr, "family member");
        int r = projection_rank(ps[i]);
        if (i == 0) rank0 = r;
        else if (r != rank0) throw Error("RankMismatch", "family members have unequal rank");
    }
    FamilyCheckResult out;
    out.verdict = true;
    out.lambda_matrix = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            auto cert = isoclinic_pair_check(ps[i], ps[j], tol);
            if (cert) {
                out.lambda_matrix(i, j) = out.lambda_matrix(j, i) = cert->lambda;
                out.worst_residual = std::max(out.worst_residual, cert->residual);
            } else {
                out.verdict = false;
                out.failing_pairs.emplace_back(i, j);
                // Report the best-fit lambda anyway for diagnostics.
                double lam = (ps[i] * ps[j] * ps[i]).trace().real() / ps[i].trace().real();
                out.lambda_matrix(i, j) = out.lambda_matrix(j, i) = lam;
                double r = spectral_norm(ps[i] * ps[j] * ps[i] - lam * ps[i]);
                out.worst_residual = std::max(out.worst_residual, r);
            }
        }
    }
    return out;
}

}  // namespace isokl
