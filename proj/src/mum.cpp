#include "isokl/mum.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "isokl/construct.hpp"

namespace isokl {

namespace {

int projection_rank(const Mat& p) {
    return static_cast<int>(std::lround(p.trace().real()));
}

// Block (i,a) of a kd x kd operator on C^k (x) C^d, index convention
// e_i (x) f_a <-> i*d + a.
Mat tensor_block(const Mat& m, int i, int a, int k, int d) {
    Mat b(k, k);
    for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
            b(p, q) = m(p * d + i, q * d + a);
    return b;
}

Mat embed_block(const Mat& block, int i, int a, int k, int d) {
    Mat m = Mat::Zero(k * d, k * d);
    for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q)
            m(p * d + i, q * d + a) = block(p, q);
    return m;
}

}  // namespace

std::optional<Measurement> measurement_check(const std::vector<Mat>& effects, const Tolerance& tol,
                                             MeasurementFailure* failure) {
    if (effects.empty()) {
        if (failure) *failure = {"empty effect list", -1, -1, 0.0};
        return std::nullopt;
    }
    double thr = tol.threshold(1.0);
    Eigen::Index dim = effects[0].rows();
    for (int a = 0; a < static_cast<int>(effects.size()); ++a) {
        if (effects[a].rows() != dim || effects[a].cols() != dim) {
            if (failure) *failure = {"dimension mismatch", a, -1, 0.0};
            return std::nullopt;
        }
        if (!is_projection(effects[a], thr)) {
            double r = spectral_norm(effects[a] * effects[a] - effects[a]);
            if (failure) *failure = {"effect is not a projection", a, -1, r};
            return std::nullopt;
        }
    }
    for (int a = 0; a < static_cast<int>(effects.size()); ++a)
        for (int b = a + 1; b < static_cast<int>(effects.size()); ++b) {
            double r = spectral_norm(effects[a] * effects[b]);
            if (r > thr) {
                if (failure) *failure = {"effects have non-orthogonal ranges", a, b, r};
                return std::nullopt;
            }
        }
    Mat sum = Mat::Zero(dim, dim);
    for (const Mat& e : effects) sum += e;
    double r = spectral_norm(sum - Mat::Identity(dim, dim));
    if (r > thr) {
        if (failure) *failure = {"effects do not sum to the identity", -1, -1, r};
        return std::nullopt;
    }
    Measurement m;
    m.d = static_cast<int>(effects.size());
    m.dim = dim;
    m.effects = effects;
    return m;
}

std::optional<MUMFamily> mum_check(const std::vector<Measurement>& family, const Tolerance& tol,
                                   MeasurementFailure* failure) {
    if (family.size() < 2) {
        if (failure) *failure = {"need at least two measurements", -1, -1, 0.0};
        return std::nullopt;
    }
    int d = family[0].d;
    Eigen::Index dim = family[0].dim;
    for (const auto& m : family)
        if (m.d != d || m.dim != dim) {
            if (failure) *failure = {"measurements disagree on d or dim", -1, -1, 0.0};
            return std::nullopt;
        }
    int k = projection_rank(family[0].effects[0]);
    for (const auto& m : family)
        for (const Mat& e : m.effects)
            if (projection_rank(e) != k) {
                if (failure) *failure = {"effect ranks differ", -1, -1, 0.0};
                return std::nullopt;
            }

    double thr = tol.threshold(1.0);
    MUMFamily out;
    out.measurements = family;
    out.common_rank = k;
    for (size_t mi = 0; mi < family.size(); ++mi) {
        for (size_t mj = mi + 1; mj < family.size(); ++mj) {
            for (int a = 0; a < d; ++a) {
                for (int b = 0; b < d; ++b) {
                    const Mat &pa = family[mi].effects[a], &qb = family[mj].effects[b];
                    double r1 = spectral_norm(pa - d * pa * qb * pa);
                    double r2 = spectral_norm(qb - d * qb * pa * qb);
                    double r = std::max(r1, r2);
                    out.max_residual = std::max(out.max_residual, r);
                    if (r > thr) {
                        if (failure)
                            *failure = {"cross pair fails the MUM equations, measurements (" +
                                            std::to_string(mi) + "," + std::to_string(mj) + ")",
                                        a, b, r};
                        return std::nullopt;
                    }
                }
            }
        }
    }
    return out;
}

MUMFamily mum_from_construction(int d, int n) {
    Tolerance tol;
    OmegaFamily gen = omega_commuting_generators(d, n);
    std::vector<Measurement> measurements;
    for (const Mat& a : gen.members) {
        Measurement m;
        m.d = d;
        m.dim = gen.dim * d;
        m.effects = omega_rotated_family(a, d, tol);
        measurements.push_back(std::move(m));
    }
    MeasurementFailure fail;
    auto fam = mum_check(measurements, tol, &fail);
    if (!fam)
        throw Error("ConstructionFailed",
                    "constructed family failed validation: " + fail.reason);
    return *fam;
}

MUMKLReport mum_kl_check(const std::vector<Mat>& vs, const std::vector<Mat>& ws, const Mat& p_c,
                         const Tolerance& tol) {
    double thr = tol.threshold(1.0);
    if (vs.empty() || vs.size() != ws.size())
        throw Error("DimensionMismatch", "vs and ws must be nonempty and of equal size");
    int d = static_cast<int>(vs.size());
    if (!is_projection(p_c, thr)) throw Error("NotProjection", "p_c is not a projection");
    for (int a = 0; a < d; ++a) {
        if (spectral_norm(vs[a].adjoint() * vs[a] - p_c) > thr)
            throw Error("NotCompatible",
                        "vs[" + std::to_string(a) + "] does not have initial projection p_c");
        if (spectral_norm(ws[a].adjoint() * ws[a] - p_c) > thr)
            throw Error("NotCompatible",
                        "ws[" + std::to_string(a) + "] does not have initial projection p_c");
    }
    std::vector<Mat> v_finals, w_finals;
    for (int a = 0; a < d; ++a) {
        v_finals.push_back(vs[a] * vs[a].adjoint());
        w_finals.push_back(ws[a] * ws[a].adjoint());
    }
    MeasurementFailure fail;
    if (!measurement_check(v_finals, tol, &fail))
        throw Error("NotCompatible", "final projections of vs are not a measurement: " + fail.reason);
    if (!measurement_check(w_finals, tol, &fail))
        throw Error("NotCompatible", "final projections of ws are not a measurement: " + fail.reason);

    Subspace code = orthonormal_basis(p_c, tol);
    const Mat& q = code.basis;
    Mat id = Mat::Identity(p_c.rows(), p_c.cols());
    double target = 1.0 / std::sqrt(static_cast<double>(d));

    MUMKLReport rep;
    rep.verdict = true;
    rep.unitaries.assign(d, std::vector<Mat>(d));
    rep.residuals = Eigen::MatrixXd::Zero(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            Mat m = p_c * vs[a].adjoint() * ws[b] * p_c;
            Mat mr = q.adjoint() * m * q;
            Eigen::JacobiSVD<Mat> svd(mr, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            double dev = std::max(std::abs(sv(0) - target),
                                  std::abs(sv(sv.size() - 1) - target));
            if (dev > thr) {
                rep.verdict = false;
                rep.residuals(a, b) = dev;
                rep.unitaries[a][b] = id;
                continue;
            }
            Mat u = extend_to_unitary(Mat(q * svd.matrixU() * svd.matrixV().adjoint() * q.adjoint()),
                                      p_c, tol);
            rep.unitaries[a][b] = u;
            rep.residuals(a, b) = spectral_norm(m - target * u * p_c);
            if (rep.residuals(a, b) > thr) rep.verdict = false;
        }
    }
    return rep;
}

CanonicalForm canonical_form_extract(const MUMFamily& family, const Tolerance& tol) {
    if (family.measurements.size() != 2)
        throw Error("RelationViolated", "canonical form extraction needs exactly 2 measurements");
    const Measurement& pm = family.measurements[0];
    const Measurement& qm = family.measurements[1];
    int d = pm.d;
    int k = family.common_rank;
    if (static_cast<Eigen::Index>(k) * d != pm.dim)
        throw Error("RelationViolated", "dim != k * d");
    const Mat& p1 = pm.effects[0];
    const Mat& q1 = qm.effects[0];

    Subspace anchor = orthonormal_basis(p1, tol);
    if (anchor.dim() != k) throw Error("RelationViolated", "anchor rank disagrees with k");

    // Slot isometries C^k -> range(P_a), bridged through Q_1 so every slot
    // gets one: w_a = d P_a Q_1 e. The MUM equations make each an isometry,
    // and a = 0 recovers the anchor basis (d P_1 Q_1 P_1 = P_1).
    std::vector<Mat> w(d);
    for (int a = 0; a < d; ++a)
        w[a] = static_cast<double>(d) * pm.effects[a] * q1 * anchor.basis;

    // U^H maps e_i (x) f_a -> w_a e_i.
    Mat u_dag(pm.dim, k * d);
    for (int i = 0; i < k; ++i)
        for (int a = 0; a < d; ++a) u_dag.col(i * d + a) = w[a].col(i);
    Mat u = u_dag.adjoint();

    double thr = tol.threshold(static_cast<double>(d));
    if (!is_unitary(u, thr))
        throw Error("RelationViolated", "basis change is not unitary");

    for (int a = 0; a < d; ++a) {
        Mat target = embed_block(Mat::Identity(k, k), a, a, k, d);
        double r = spectral_norm(u * pm.effects[a] * u.adjoint() - target);
        if (r > thr)
            throw Error("RelationViolated", "U P_a U^H is not I_k (x) |a><a| for a = " +
                                                std::to_string(a) + ", residual " +
                                                std::to_string(r));
    }

    CanonicalForm cf;
    cf.k = k;
    cf.d = d;
    cf.basis_change = u;
    cf.blocks.assign(d, std::vector<std::vector<Mat>>(d, std::vector<Mat>(d)));
    for (int b = 0; b < d; ++b)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                cf.blocks[b][i][j] =
                    static_cast<double>(d) * w[i].adjoint() * qm.effects[b] * w[j];

    RelationsReport rel = canonical_relations_check(cf, tol);
    if (!rel.verdict)
        throw Error("RelationViolated",
                    "extracted blocks violate the canonical relations (residuals: diag " +
                        std::to_string(rel.diagonal_residual) + ", adjoint " +
                        std::to_string(rel.adjoint_residual) + ", chain " +
                        std::to_string(rel.chain_residual) + ", sum " +
                        std::to_string(rel.sum_residual) + ")");
    return cf;
}

RelationsReport canonical_relations_check(const CanonicalForm& cf, const Tolerance& tol) {
    RelationsReport rep;
    int d = cf.d, k = cf.k;
    Mat id = Mat::Identity(k, k);
    for (int b = 0; b < d; ++b) {
        for (int i = 0; i < d; ++i) {
            rep.diagonal_residual =
                std::max(rep.diagonal_residual, spectral_norm(cf.blocks[b][i][i] - id));
            for (int j = 0; j < d; ++j) {
                rep.adjoint_residual = std::max(
                    rep.adjoint_residual,
                    spectral_norm(Mat(cf.blocks[b][i][j].adjoint()) - cf.blocks[b][j][i]));
                for (int l = 0; l < d; ++l)
                    rep.chain_residual = std::max(
                        rep.chain_residual,
                        spectral_norm(cf.blocks[b][i][j] -
                                      cf.blocks[b][i][l] * cf.blocks[b][l][j]));
            }
        }
    }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Mat sum = Mat::Zero(k, k);
            for (int b = 0; b < d; ++b) sum += cf.blocks[b][i][j];
            Mat target = i == j ? Mat(static_cast<double>(d) * id) : Mat(Mat::Zero(k, k));
            rep.sum_residual = std::max(rep.sum_residual, spectral_norm(sum - target));
        }
    double thr = tol.threshold(static_cast<double>(d));
    rep.verdict = rep.diagonal_residual <= thr && rep.adjoint_residual <= thr &&
                  rep.chain_residual <= thr && rep.sum_residual <= thr;
    return rep;
}

std::pair<Measurement, Measurement> canonical_form_rebuild(const CanonicalForm& cf) {
    int d = cf.d, k = cf.k;
    const Mat& u = cf.basis_change;
    Measurement pm, qm;
    pm.d = qm.d = d;
    pm.dim = qm.dim = static_cast<Eigen::Index>(k) * d;
    for (int a = 0; a < d; ++a) {
        Mat pa = embed_block(Mat::Identity(k, k), a, a, k, d);
        pm.effects.push_back(u.adjoint() * pa * u);
    }
    for (int b = 0; b < d; ++b) {
        Mat qb = Mat::Zero(k * d, k * d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                qb += embed_block(cf.blocks[b][i][j] / static_cast<double>(d), i, j, k, d);
        qm.effects.push_back(u.adjoint() * qb * u);
    }
    return {pm, qm};
}

}  // namespace isokl
