#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "isokl/pauli.hpp"
#include "test_util.hpp"

using namespace isokl;

static const Tolerance kTol;

namespace {

// Every bit pattern with every phase for a given qubit count.
std::vector<PauliOperator> all_paulis(int n) {
    std::vector<PauliOperator> out;
    for (int bits = 0; bits < (1 << (2 * n)); ++bits) {
        for (int phase = 0; phase < 4; ++phase) {
            PauliOperator p;
            p.n = n;
            p.phase = phase;
            for (int q = 0; q < n; ++q) {
                p.x_bits.push_back((bits >> q) & 1);
                p.z_bits.push_back((bits >> (n + q)) & 1);
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

PauliOperator random_pauli(std::mt19937_64& rng, int n) {
    PauliOperator p;
    p.n = n;
    p.phase = static_cast<int>(rng() % 4);
    for (int q = 0; q < n; ++q) {
        p.x_bits.push_back(rng() & 1);
        p.z_bits.push_back(rng() & 1);
    }
    return p;
}

}  // namespace

TEST_CASE("parse simple strings") {
    auto p = pauli_parse("XIZ");
    CHECK(p.n == 3);
    CHECK(p.phase == 0);
    CHECK(p.x_bits == std::vector<bool>{true, false, false});
    CHECK(p.z_bits == std::vector<bool>{false, false, true});

    auto y = pauli_parse("-iY");
    CHECK(y.n == 1);
    // -i prefix (i^3) combines with Y's internal i: i^3 * i = i^0.
    CHECK(y.phase == 0);
    CHECK(y.x_bits[0]);
    CHECK(y.z_bits[0]);
    Mat dense = pauli_to_matrix(y);
    Mat expect(2, 2);
    expect << 0, -1, 1, 0;  // -i * Y = X * Z
    CHECK((dense - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_WITH_AS(pauli_parse("XQ"), doctest::Contains("position 1"), Error);
    CHECK_THROWS_AS(pauli_parse(""), Error);
    CHECK_THROWS_AS(pauli_parse("-i"), Error);
}

TEST_CASE("format round-trips parse") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        auto p = random_pauli(rng, 4);
        CHECK(pauli_parse(pauli_format(p)) == p);
    }
}

TEST_CASE("XZ and ZX differ by a sign") {
    auto xz = pauli_mul(pauli_parse("X"), pauli_parse("Z"));
    auto zx = pauli_mul(pauli_parse("Z"), pauli_parse("X"));
    CHECK(xz.x_bits == zx.x_bits);
    CHECK(xz.z_bits == zx.z_bits);
    CHECK((xz.phase - zx.phase + 4) % 4 == 2);
    // Dense oracle.
    Mat lhs = pauli_to_matrix(pauli_parse("X")) * pauli_to_matrix(pauli_parse("Z"));
    CHECK((pauli_to_matrix(xz) - lhs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mul: X*X = I") {
    auto r = pauli_mul(pauli_parse("X"), pauli_parse("X"));
    CHECK(r.phase == 0);
    CHECK_FALSE(r.x_bits[0]);
    CHECK_FALSE(r.z_bits[0]);
}

TEST_CASE("mul agrees with dense products exhaustively for n <= 2") {
    for (int n = 1; n <= 2; ++n) {
        auto ops = all_paulis(n);
        for (const auto& p : ops) {
            Mat mp = pauli_to_matrix(p);
            for (const auto& q : ops) {
                Mat dense = mp * pauli_to_matrix(q);
                Mat sym = pauli_to_matrix(pauli_mul(p, q));
                CHECK((dense - sym).cwiseAbs().maxCoeff() == 0.0);
            }
        }
    }
}

TEST_CASE("p * adjoint(p) = identity for random Paulis") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 1000; ++t) {
        int n = 1 + static_cast<int>(rng() % 8);
        auto p = random_pauli(rng, n);
        auto r = pauli_mul(p, pauli_adjoint(p));
        CHECK(r.phase == 0);
        for (int q = 0; q < n; ++q) {
            CHECK_FALSE(r.x_bits[q]);
            CHECK_FALSE(r.z_bits[q]);
        }
    }
}

TEST_CASE("commutation: basic cases and dense agreement") {
    CHECK_FALSE(pauli_commutes(pauli_parse("X"), pauli_parse("Z")));
    CHECK(pauli_commutes(pauli_parse("XX"), pauli_parse("ZZ")));
    std::mt19937_64 rng(13);
    std::vector<PauliOperator> set;
    for (int t = 0; t < 12; ++t) set.push_back(random_pauli(rng, 3));
    for (const auto& p : set)
        for (const auto& q : set) {
            Mat mp = pauli_to_matrix(p), mq = pauli_to_matrix(q);
            bool dense_commutes = (mp * mq - mq * mp).cwiseAbs().maxCoeff() == 0.0;
            CHECK(pauli_commutes(p, q) == dense_commutes);
        }
}

TEST_CASE("dense realizations of Z, X, XZ") {
    Mat z = pauli_to_matrix(pauli_parse("Z"));
    CHECK(z(0, 0) == Complex(1, 0));
    CHECK(z(1, 1) == Complex(-1, 0));
    Mat x = pauli_to_matrix(pauli_parse("X"));
    CHECK(x(0, 1) == Complex(1, 0));
    CHECK(x(1, 0) == Complex(1, 0));
    auto xz = pauli_mul(pauli_parse("X"), pauli_parse("Z"));
    Mat m = pauli_to_matrix(xz);
    Mat expect(2, 2);
    expect << 0, -1, 1, 0;
    CHECK((m - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pauli_to_matrix enforces the qubit cap") {
    PauliOperator big;
    big.n = 13;
    big.x_bits.assign(13, false);
    big.z_bits.assign(13, false);
    CHECK_THROWS_WITH_AS(pauli_to_matrix(big), doctest::Contains("TooLarge"), Error);
}

TEST_CASE("stabilizer projection: <Z> is |0><0|") {
    auto s = parse_stabilizer_group("Z");
    Mat p = stabilizer_projection(s);
    CHECK(std::abs(p(0, 0) - Complex(1, 0)) == 0.0);
    CHECK(std::abs(p(1, 1)) == 0.0);
}

TEST_CASE("stabilizer projection: <Z1, Z2> on 3 qubits") {
    auto s = parse_stabilizer_group("ZII,IZI");
    Mat p = stabilizer_projection(s);
    // span{|000>, |001>}
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(p(i, i) - (i < 2 ? Complex(1, 0) : Complex(0, 0))) == 0.0);
    CHECK(std::abs(p.trace().real() - 2.0) < 1e-12);
}

TEST_CASE("stabilizer projection: <Z1Z2> on 2 qubits via dense eigenspace oracle") {
    auto s = parse_stabilizer_group("ZZ");
    Mat p = stabilizer_projection(s);
    Mat zz = pauli_to_matrix(pauli_parse("ZZ"));
    Eigen::SelfAdjointEigenSolver<Mat> es(zz);
    Mat oracle = Mat::Zero(4, 4);
    for (int i = 0; i < 4; ++i)
        if (std::abs(es.eigenvalues()(i) - 1.0) < 1e-12)
            oracle += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    CHECK(spectral_norm(p - oracle) < 1e-12);
    CHECK(std::abs(p.trace().real() - 2.0) < 1e-12);
}

TEST_CASE("group validation rejects bad generator sets") {
    CHECK_THROWS_WITH_AS(parse_stabilizer_group("X,Z"), doctest::Contains("anti-commute"), Error);
    CHECK_THROWS_WITH_AS(parse_stabilizer_group("ZI,IZ,ZZ"), doctest::Contains("dependent"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_stabilizer_group("+iY"), doctest::Contains("-I"), Error);
    CHECK_THROWS_AS(parse_stabilizer_group("ZI,IZZ"), Error);
}

TEST_CASE("classification on <Z1, Z2>") {
    auto s = parse_stabilizer_group("ZII,IZI");
    CHECK(classify_error(s, pauli_parse("ZII")) == ErrorClass::StabilizerCoset);
    CHECK(classify_error(s, pauli_parse("IIX")) == ErrorClass::Logical);
    CHECK(classify_error(s, pauli_parse("XII")) == ErrorClass::Detectable);
    CHECK(classify_error(s, pauli_parse("IIZ")) == ErrorClass::Logical);
    CHECK(classify_error(s, pauli_parse("-ZZI")) == ErrorClass::StabilizerCoset);
}

TEST_CASE("classification is invariant under multiplication by a generator") {
    std::mt19937_64 rng(15);
    auto s = parse_stabilizer_group("ZZI,IZZ");
    for (int t = 0; t < 50; ++t) {
        auto e = random_pauli(rng, 3);
        auto cls = classify_error(s, e);
        for (const auto& g : s.generators)
            CHECK(classify_error(s, pauli_mul(e, g)) == cls);
    }
}

TEST_CASE("logical operators commute with P_C, detectable ones are annihilated") {
    auto s = parse_stabilizer_group("ZII,IZI");
    Mat p = stabilizer_projection(s);
    Mat logical = pauli_to_matrix(pauli_parse("IIX"));
    CHECK(spectral_norm(logical * p - p * logical) < 1e-12);
    Mat detectable = pauli_to_matrix(pauli_parse("XII"));
    CHECK(spectral_norm(p * detectable * p) < 1e-12);
}

TEST_CASE("error-set verification on <Z1, Z2> with {I, X1, X2, X3}") {
    auto s = parse_stabilizer_group("ZII,IZI");
    std::vector<PauliOperator> errors = {pauli_parse("III"), pauli_parse("XII"),
                                         pauli_parse("IXI"), pauli_parse("IIX")};
    auto rep = verify_error_set(s, errors, kTol);
    CHECK(rep.isoclinic);
    CHECK(rep.consistent);
    CHECK(rep.pair_classes[0][3] == ErrorClass::Logical);
    CHECK(rep.pair_classes[0][1] == ErrorClass::Detectable);
    CHECK(rep.pair_classes[0][2] == ErrorClass::Detectable);
    bool found = false;
    for (auto [i, j] : rep.kl_nontrivial_pairs)
        if (i == 0 && j == 3) found = true;
    CHECK(found);
}

TEST_CASE("error-set verification: trivial single-error case") {
    auto s = parse_stabilizer_group("ZII,IZI");
    auto rep = verify_error_set(s, {pauli_parse("III")}, kTol);
    CHECK(rep.isoclinic);
    CHECK(rep.consistent);
}

TEST_CASE("error-set verification on the bit-flip code: all pairs detectable") {
    auto s = parse_stabilizer_group("ZZI,IZZ");
    std::vector<PauliOperator> errors = {pauli_parse("III"), pauli_parse("XII"),
                                         pauli_parse("IXI"), pauli_parse("IIX")};
    auto rep = verify_error_set(s, errors, kTol);
    CHECK(rep.isoclinic);
    CHECK(rep.consistent);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) CHECK(rep.pair_classes[i][j] == ErrorClass::Detectable);
    CHECK(rep.kl_nontrivial_pairs.empty());
}

TEST_CASE("stabilizer projection rank is exactly 2^(n-g) on random groups") {
    std::mt19937_64 rng(314);
    int built = 0;
    while (built < 20) {
        int n = 2 + static_cast<int>(rng() % 5);
        int g = 1 + static_cast<int>(rng() % n);
        std::vector<PauliOperator> gens;
        for (int t = 0; t < 200 && static_cast<int>(gens.size()) < g; ++t) {
            auto cand = random_pauli(rng, n);
            cand.phase = (rng() & 1) ? 0 : 2;  // Hermitian sign choices only
            bool ok = !pauli_is_hermitian(cand) ? false : true;
            for (const auto& e : gens) ok = ok && pauli_commutes(cand, e);
            if (!ok) continue;
            auto trial = gens;
            trial.push_back(cand);
            try {
                make_stabilizer_group(n, trial);
            } catch (const Error&) {
                continue;
            }
            gens = trial;
        }
        if (static_cast<int>(gens.size()) != g) continue;
        auto s = make_stabilizer_group(n, gens);
        Mat p = stabilizer_projection(s);
        double expected = std::pow(2.0, n - g);
        CHECK(std::abs(p.trace().real() - expected) < 1e-10);
        CHECK(is_projection(p, 1e-12));
        ++built;
    }
}
