#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "isokl/construct.hpp"
#include "isokl/isoclinic.hpp"
#include "isokl/mum.hpp"
#include "test_util.hpp"

using namespace isokl;
using testutil::random_projection;

static const Tolerance kTol;

namespace {

Measurement basis_measurement(const Mat& u) {
    // One rank-1 effect per column of a unitary.
    Measurement m;
    m.d = static_cast<int>(u.cols());
    m.dim = u.rows();
    for (Eigen::Index c = 0; c < u.cols(); ++c)
        m.effects.push_back(u.col(c) * u.col(c).adjoint());
    return m;
}

Mat fourier_matrix(int d) {
    Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / d);
    Mat f(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) f(r, c) = std::pow(omega, r * c) / std::sqrt(double(d));
    return f;
}

}  // namespace

TEST_CASE("measurement_check accepts projective two-outcome splits") {
    std::mt19937_64 rng(12);
    Mat p = random_projection(rng, 5, 2);
    auto m = measurement_check({p, Mat(Mat::Identity(5, 5) - p)}, kTol);
    REQUIRE(m.has_value());
    CHECK(m->d == 2);
    CHECK(m->dim == 5);
}

TEST_CASE("measurement_check rejects duplicated and non-projective effects") {
    std::mt19937_64 rng(13);
    Mat p = random_projection(rng, 4, 2);
    MeasurementFailure fail;
    CHECK_FALSE(measurement_check({p, p}, kTol, &fail).has_value());
    CHECK_FALSE(measurement_check({Mat(0.5 * p), Mat(Mat::Identity(4, 4) - 0.5 * p)}, kTol,
                                  &fail)
                    .has_value());
    CHECK(fail.reason == "effect is not a projection");
    CHECK_FALSE(measurement_check({p}, kTol).has_value());  // does not sum to I
}

TEST_CASE("mum_check: computational vs Hadamard basis, d = 2") {
    Mat h(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    auto fam = mum_check({basis_measurement(Mat::Identity(2, 2)), basis_measurement(h)}, kTol);
    REQUIRE(fam.has_value());
    CHECK(fam->common_rank == 1);
    CHECK(fam->max_residual < 1e-14);
}

TEST_CASE("mum_check: computational vs Fourier basis, d = 3 and d = 5") {
    for (int d : {3, 5}) {
        auto fam =
            mum_check({basis_measurement(Mat::Identity(d, d)), basis_measurement(fourier_matrix(d))},
                      kTol);
        REQUIRE(fam.has_value());
        CHECK(fam->common_rank == 1);
        CHECK(fam->max_residual < 1e-12);
    }
}

TEST_CASE("mum_check rejects a measurement paired with itself") {
    Measurement comp = basis_measurement(Mat::Identity(2, 2));
    MeasurementFailure fail;
    CHECK_FALSE(mum_check({comp, comp}, kTol, &fail).has_value());
    CHECK(fail.residual > 0.5);
}

TEST_CASE("mum_from_construction: dimensions and ranks") {
    for (int d : {2, 3, 4}) {
        auto fam = mum_from_construction(d, 2);
        REQUIRE(fam.measurements.size() == 2);
        CHECK(fam.measurements[0].dim == d * d);
        CHECK(fam.common_rank == d);
        CHECK(fam.max_residual < 1e-10);
    }
    auto fam3 = mum_from_construction(2, 3);
    REQUIRE(fam3.measurements.size() == 3);
    CHECK(fam3.measurements[0].dim == 8);
    CHECK(fam3.common_rank == 4);
}

TEST_CASE("constructed effects are cross-measurement isoclinic at lambda 1/d") {
    for (int d : {2, 3}) {
        auto fam = mum_from_construction(d, 2);
        const auto& pm = fam.measurements[0];
        const auto& qm = fam.measurements[1];
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                auto cert = isoclinic_pair_check(pm.effects[a], qm.effects[b], kTol);
                REQUIRE(cert.has_value());
                CHECK(std::abs(cert->lambda - 1.0 / d) < 1e-10);
            }
            for (int b = a + 1; b < d; ++b) {
                auto cert = isoclinic_pair_check(pm.effects[a], pm.effects[b], kTol);
                REQUIRE(cert.has_value());
                CHECK(std::abs(cert->lambda) < 1e-10);
            }
        }
    }
}

TEST_CASE("sqrt(d) * P_a * Q_1 is a cross-measurement partial isometry") {
    auto fam = mum_from_construction(3, 2);
    const Mat& p1 = fam.measurements[0].effects[0];
    const Mat& q1 = fam.measurements[1].effects[0];
    for (int a = 0; a < 3; ++a) {
        Mat v = std::sqrt(3.0) * fam.measurements[0].effects[a] * q1;
        auto c = is_partial_isometry(v, kTol);
        CHECK(c.verdict);
        CHECK(spectral_norm(c.initial - q1) < 1e-10);
        CHECK(spectral_norm(c.final - fam.measurements[0].effects[a]) < 1e-10);
    }
    for (int b = 0; b < 3; ++b) {
        Mat w = std::sqrt(3.0) * fam.measurements[1].effects[b] * p1;
        auto c = is_partial_isometry(w, kTol);
        CHECK(c.verdict);
        CHECK(spectral_norm(c.initial - p1) < 1e-10);
    }
}

TEST_CASE("mum_kl_check passes on rotated graph intertwiners") {
    for (int d : {2, 3}) {
        auto gen = omega_commuting_generators(d, 2);
        Mat pinf = p_infinity(gen.dim, d);
        std::vector<Mat> vs, ws;
        for (int r = 0; r < d; ++r) {
            Complex w = std::pow(gen.omega, r);
            vs.push_back(graph_partial_isometry(w * gen.members[0], d, kTol));
            ws.push_back(graph_partial_isometry(w * gen.members[1], d, kTol));
        }
        auto rep = mum_kl_check(vs, ws, pinf, kTol);
        CHECK(rep.verdict);
        CHECK(rep.residuals.maxCoeff() < 1e-10);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                CHECK(is_unitary(rep.unitaries[a][b], 1e-10));
    }
}

TEST_CASE("mum_kl_check fails when both families share a generator") {
    int d = 3;
    auto gen = omega_commuting_generators(d, 2);
    Mat pinf = p_infinity(gen.dim, d);
    std::vector<Mat> vs;
    for (int r = 0; r < d; ++r)
        vs.push_back(graph_partial_isometry(std::pow(gen.omega, r) * gen.members[0], d, kTol));
    auto rep = mum_kl_check(vs, vs, pinf, kTol);
    CHECK_FALSE(rep.verdict);
}

TEST_CASE("mum_kl_check validates its preconditions") {
    int d = 2;
    auto gen = omega_commuting_generators(d, 2);
    Mat pinf = p_infinity(gen.dim, d);
    std::vector<Mat> vs;
    for (int r = 0; r < d; ++r)
        vs.push_back(graph_partial_isometry(std::pow(gen.omega, r) * gen.members[0], d, kTol));
    CHECK_THROWS_WITH_AS(mum_kl_check(vs, vs, Mat(0.5 * pinf), kTol),
                         doctest::Contains("NotProjection"), Error);
    std::vector<Mat> scaled = vs;
    scaled[0] *= 0.5;
    CHECK_THROWS_WITH_AS(mum_kl_check(scaled, vs, pinf, kTol),
                         doctest::Contains("NotCompatible"), Error);
}

TEST_CASE("canonical form extraction from the constructed family") {
    for (int d : {2, 3}) {
        auto fam = mum_from_construction(d, 2);
        auto cf = canonical_form_extract(fam, kTol);
        CHECK(cf.k == d);
        CHECK(cf.d == d);
        CHECK(is_unitary(cf.basis_change, 1e-10));
        auto rel = canonical_relations_check(cf, kTol);
        CHECK(rel.verdict);
        CHECK(rel.diagonal_residual < 1e-9);
        CHECK(rel.adjoint_residual < 1e-9);
        CHECK(rel.chain_residual < 1e-9);
        CHECK(rel.sum_residual < 1e-9);
    }
}

TEST_CASE("canonical form round-trips back to the original effects") {
    auto fam = mum_from_construction(3, 2);
    auto cf = canonical_form_extract(fam, kTol);
    auto [pm, qm] = canonical_form_rebuild(cf);
    for (int a = 0; a < 3; ++a) {
        CHECK(spectral_norm(pm.effects[a] - fam.measurements[0].effects[a]) < 1e-9);
        CHECK(spectral_norm(qm.effects[a] - fam.measurements[1].effects[a]) < 1e-9);
    }
    auto roundtrip = mum_check({pm, qm}, kTol);
    CHECK(roundtrip.has_value());
}

TEST_CASE("canonical relations on hand-built scalar blocks") {
    CanonicalForm cf;
    cf.k = 1;
    cf.d = 2;
    Mat one = Mat::Identity(1, 1);
    cf.blocks.assign(2, std::vector<std::vector<Mat>>(2, std::vector<Mat>(2)));
    // V^0 has all entries 1; V^1 flips the off-diagonal sign.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cf.blocks[0][i][j] = one;
            cf.blocks[1][i][j] = (i == j) ? one : Mat(-one);
        }
    auto rel = canonical_relations_check(cf, kTol);
    CHECK(rel.verdict);

    cf.blocks[1][0][1] = one;  // now the off-diagonals no longer cancel
    cf.blocks[1][1][0] = one;
    auto bad = canonical_relations_check(cf, kTol);
    CHECK_FALSE(bad.verdict);
    CHECK(bad.sum_residual > 1.0);
}

TEST_CASE("canonical form extraction rejects mismatched families") {
    auto fam = mum_from_construction(2, 3);  // three measurements
    CHECK_THROWS_WITH_AS(canonical_form_extract(fam, kTol),
                         doctest::Contains("RelationViolated"), Error);
}
