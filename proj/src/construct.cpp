#include "isokl/construct.hpp"

#include <cmath>
#include <numbers>

namespace isokl {

namespace {

Mat matpow(const Mat& a, int k) {
    Mat out = Mat::Identity(a.rows(), a.cols());
    for (int i = 0; i < k; ++i) out = out * a;
    return out;
}

Complex primitive_root(int d) {
    double t = 2.0 * std::numbers::pi / d;
    return {std::cos(t), std::sin(t)};
}

void require_unitary(const Mat& a, double thr, const char* name) {
    if (a.rows() != a.cols() || !is_unitary(a, thr))
        throw Error("NotUnitary", std::string(name) + " is not unitary within tolerance");
}

void require_order(const Mat& a, int d, double thr, const char* name) {
    Mat id = Mat::Identity(a.rows(), a.cols());
    if (spectral_norm(matpow(a, d) - id) > thr)
        throw Error("OrderMismatch", std::string(name) + " does not satisfy a^d = I");
}

}  // namespace

Mat clock_matrix(int d) {
    Complex omega = primitive_root(d);
    Mat z = Mat::Zero(d, d);
    Complex w{1.0, 0.0};
    for (int j = 0; j < d; ++j) {
        z(j, j) = w;
        w *= omega;
    }
    return z;
}

Mat shift_matrix(int d) {
    Mat x = Mat::Zero(d, d);
    for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
    return x;
}

AntiCommutingFamily kestelman_family(Eigen::Index m) {
    if (m < 2 || m % 2 != 0)
        throw Error("OddDimension", "anti-commuting families require even dimension >= 2");
    int q = 0;
    Eigen::Index p = m;
    while (p % 2 == 0) {
        p /= 2;
        ++q;
    }
    Mat x(2, 2), y(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    y << 0, Complex(0, -1), Complex(0, 1), 0;
    z << 1, 0, 0, -1;

    // Base: {X (x) I_p, Y (x) I_p, Z (x) I_p} of size 2p, then tensor up.
    Mat ip = Mat::Identity(p, p);
    std::vector<Mat> members = {kron(x, ip), kron(y, ip), kron(z, ip)};
    for (int layer = 1; layer < q; ++layer) {
        Eigen::Index cur = members[0].rows();
        Mat icur = Mat::Identity(cur, cur);
        std::vector<Mat> next;
        next.reserve(members.size() + 2);
        for (const Mat& b : members) next.push_back(kron(x, b));
        next.push_back(kron(y, icur));
        next.push_back(kron(z, icur));
        members = std::move(next);
    }
    AntiCommutingFamily fam;
    fam.m = m;
    fam.members = std::move(members);
    return fam;
}

Mat graph_projection(const Mat& a, int d, const Tolerance& tol) {
    if (d < 2) throw Error("OrderMismatch", "d must be at least 2");
    double thr = tol.threshold(1.0);
    require_unitary(a, thr, "a");
    if (d > 2) require_order(a, d, thr, "a");
    Eigen::Index k = a.rows();
    std::vector<Mat> pw(d);
    for (int j = 0; j < d; ++j) pw[j] = matpow(a, j);
    Mat proj(d * k, d * k);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Mat block = i >= j ? pw[i - j] : Mat(pw[j - i].adjoint());
            proj.block(i * k, j * k, k, k) = block / static_cast<double>(d);
        }
    return proj;
}

Mat graph_partial_isometry(const Mat& a, int d, const Tolerance& tol) {
    if (d < 2) throw Error("OrderMismatch", "d must be at least 2");
    double thr = tol.threshold(1.0);
    require_unitary(a, thr, "a");
    if (d > 2) require_order(a, d, thr, "a");
    Eigen::Index k = a.rows();
    Mat v = Mat::Zero(d * k, d * k);
    double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        v.block(j * k, (d - 1) * k, k, k) = scale * matpow(a, j);
    return v;
}

Mat p_infinity(Eigen::Index dim_h, int d) {
    Mat p = Mat::Zero(d * dim_h, d * dim_h);
    p.block((d - 1) * dim_h, (d - 1) * dim_h, dim_h, dim_h) = Mat::Identity(dim_h, dim_h);
    return p;
}

std::vector<Mat> omega_rotated_family(const Mat& a, int d, const Tolerance& tol) {
    double thr = tol.threshold(1.0);
    require_unitary(a, thr, "a");
    require_order(a, d, thr, "a");
    Complex omega = primitive_root(d);
    std::vector<Mat> out;
    out.reserve(d);
    Complex w{1.0, 0.0};
    for (int r = 0; r < d; ++r) {
        out.push_back(graph_projection(w * a, d, tol));
        w *= omega;
    }
    return out;
}

OmegaFamily omega_commuting_generators(int d, int n) {
    if (d < 2 || n < 2)
        throw Error("HypothesisViolation", "need d >= 2 and n >= 2");
    Complex omega = primitive_root(d);
    Mat clock = clock_matrix(d);
    Mat shift = shift_matrix(d);
    // clock * shift = omega * shift * clock.
    std::vector<Mat> members = {clock, shift};
    for (int count = 3; count <= n; ++count) {
        Eigen::Index cur = members[0].rows();
        std::vector<Mat> next;
        next.reserve(members.size() + 1);
        for (const Mat& a : members) next.push_back(kron(shift, a));
        next.push_back(kron(Mat(clock.adjoint()), Mat::Identity(cur, cur)));
        members = std::move(next);
    }
    OmegaFamily fam;
    fam.d = d;
    fam.dim = members[0].rows();
    fam.members = std::move(members);
    fam.omega = omega;
    // Verified, never assumed: re-check the defining relations.
    Tolerance tol;
    double thr = 1e-10;
    for (size_t i = 0; i < fam.members.size(); ++i) {
        require_unitary(fam.members[i], tol.threshold(1.0), "generator");
        Mat id = Mat::Identity(fam.dim, fam.dim);
        if (spectral_norm(matpow(fam.members[i], d) - id) > thr)
            throw Error("HypothesisViolation",
                        "generator " + std::to_string(i) + " does not have order d");
        for (size_t j = i + 1; j < fam.members.size(); ++j) {
            const Mat &a = fam.members[i], &b = fam.members[j];
            if (spectral_norm(a * b - fam.omega * b * a) > thr)
                throw Error("HypothesisViolation", "generators " + std::to_string(i) + " and " +
                                                       std::to_string(j) +
                                                       " violate omega-commutation");
        }
    }
    return fam;
}

Mat crossing_unitary(const Mat& a, int r, const Mat& b, int s, int d, const Tolerance& tol) {
    double thr = tol.threshold(1.0);
    if (a.rows() != a.cols() || !is_unitary(a, thr))
        throw Error("HypothesisViolation", "a is not unitary");
    if (b.rows() != b.cols() || b.rows() != a.rows() || !is_unitary(b, thr))
        throw Error("HypothesisViolation", "b is not unitary");
    Mat id = Mat::Identity(a.rows(), a.cols());
    double ra = spectral_norm(matpow(a, d) - id);
    if (ra > thr)
        throw Error("HypothesisViolation", "a^d != I, residual " + std::to_string(ra));
    double rb = spectral_norm(matpow(b, d) - id);
    if (rb > thr)
        throw Error("HypothesisViolation", "b^d != I, residual " + std::to_string(rb));
    Complex omega = primitive_root(d);
    double rc = spectral_norm(a * b - omega * b * a);
    if (rc > thr)
        throw Error("HypothesisViolation", "ab != omega*ba, residual " + std::to_string(rc));

    Mat out = Mat::Zero(a.rows(), a.cols());
    Mat adag = a.adjoint();
    for (int j = 0; j < d; ++j)
        out += std::pow(omega, (s - r) * j) * matpow(adag, j) * matpow(b, j);
    return out / std::sqrt(static_cast<double>(d));
}

}  // namespace isokl
