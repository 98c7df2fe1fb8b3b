#include "isokl/pauli.hpp"

#include <cmath>

#include "isokl/isoclinic.hpp"
#include "isokl/kl.hpp"

namespace isokl {

namespace {

constexpr Complex kImag{0.0, 1.0};

Complex phase_value(int phase) {
    switch (((phase % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

int xz_overlap(const PauliOperator& p) {
    int s = 0;
    for (int q = 0; q < p.n; ++q)
        if (p.x_bits[q] && p.z_bits[q]) ++s;
    return s;
}

// Rows of the binary symplectic matrix: (x_1..x_n | z_1..z_n).
std::vector<std::vector<bool>> bit_rows(const std::vector<PauliOperator>& gens, int n) {
    std::vector<std::vector<bool>> rows;
    for (const auto& g : gens) {
        std::vector<bool> row(2 * n);
        for (int q = 0; q < n; ++q) {
            row[q] = g.x_bits[q];
            row[n + q] = g.z_bits[q];
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int gf2_rank(std::vector<std::vector<bool>> rows) {
    if (rows.empty()) return 0;
    size_t cols = rows[0].size();
    int rank = 0;
    size_t pivot_row = 0;
    for (size_t c = 0; c < cols && pivot_row < rows.size(); ++c) {
        size_t sel = pivot_row;
        while (sel < rows.size() && !rows[sel][c]) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[pivot_row]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r != pivot_row && rows[r][c])
                for (size_t cc = 0; cc < cols; ++cc)
                    rows[r][cc] = rows[r][cc] != rows[pivot_row][cc];
        }
        ++pivot_row;
        ++rank;
    }
    return rank;
}

bool in_gf2_span(const std::vector<std::vector<bool>>& basis, const std::vector<bool>& target) {
    auto rows = basis;
    int r0 = gf2_rank(rows);
    rows.push_back(target);
    return gf2_rank(rows) == r0;
}

}  // namespace

const char* to_string(ErrorClass c) {
    switch (c) {
        case ErrorClass::StabilizerCoset: return "StabilizerCoset";
        case ErrorClass::Logical: return "Logical";
        default: return "Detectable";
    }
}

PauliOperator pauli_parse(const std::string& s) {
    size_t pos = 0;
    int phase = 0;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        bool minus = s[pos] == '-';
        ++pos;
        if (pos < s.size() && s[pos] == 'i') {
            phase = minus ? 3 : 1;
            ++pos;
        } else {
            phase = minus ? 2 : 0;
        }
    }
    PauliOperator p;
    p.phase = phase;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        bool x = false, z = false;
        switch (c) {
            case 'I': break;
            case 'X': x = true; break;
            case 'Z': z = true; break;
            case 'Y':
                x = z = true;
                p.phase = (p.phase + 1) % 4;  // Y = i * X * Z
                break;
            default:
                throw Error("ParseError", "unexpected character '" + std::string(1, c) +
                                              "' at position " + std::to_string(pos));
        }
        p.x_bits.push_back(x);
        p.z_bits.push_back(z);
    }
    p.n = static_cast<int>(p.x_bits.size());
    if (p.n == 0)
        throw Error("ParseError", "empty Pauli body at position " + std::to_string(pos));
    return p;
}

std::string pauli_format(const PauliOperator& p) {
    int internal = 0;
    std::string body;
    for (int q = 0; q < p.n; ++q) {
        bool x = p.x_bits[q], z = p.z_bits[q];
        if (x && z) {
            body += 'Y';
            ++internal;
        } else if (x) {
            body += 'X';
        } else if (z) {
            body += 'Z';
        } else {
            body += 'I';
        }
    }
    switch (((p.phase - internal) % 4 + 4) % 4) {
        case 0: return body;
        case 1: return "+i" + body;
        case 2: return "-" + body;
        default: return "-i" + body;
    }
}

PauliOperator pauli_mul(const PauliOperator& p, const PauliOperator& q) {
    if (p.n != q.n) throw Error("SizeMismatch", "Pauli operators act on different qubit counts");
    PauliOperator r;
    r.n = p.n;
    r.x_bits.resize(p.n);
    r.z_bits.resize(p.n);
    int swaps = 0;  // Z-past-X transpositions, each contributing -1
    for (int i = 0; i < p.n; ++i) {
        r.x_bits[i] = p.x_bits[i] != q.x_bits[i];
        r.z_bits[i] = p.z_bits[i] != q.z_bits[i];
        if (p.z_bits[i] && q.x_bits[i]) ++swaps;
    }
    r.phase = (p.phase + q.phase + 2 * swaps) % 4;
    return r;
}

PauliOperator pauli_adjoint(const PauliOperator& p) {
    PauliOperator r = p;
    r.phase = (((-p.phase + 2 * xz_overlap(p)) % 4) + 4) % 4;
    return r;
}

bool pauli_commutes(const PauliOperator& p, const PauliOperator& q) {
    if (p.n != q.n) throw Error("SizeMismatch", "Pauli operators act on different qubit counts");
    int form = 0;
    for (int i = 0; i < p.n; ++i) {
        if (p.x_bits[i] && q.z_bits[i]) ++form;
        if (p.z_bits[i] && q.x_bits[i]) ++form;
    }
    return form % 2 == 0;
}

bool pauli_is_hermitian(const PauliOperator& p) {
    return (p.phase + xz_overlap(p)) % 2 == 0;
}

Mat pauli_to_matrix(const PauliOperator& p, int cap) {
    if (p.n > cap)
        throw Error("TooLarge", "dense realization capped at " + std::to_string(cap) + " qubits");
    Mat out = Mat::Identity(1, 1);
    for (int q = 0; q < p.n; ++q) {
        Mat f(2, 2);
        bool x = p.x_bits[q], z = p.z_bits[q];
        if (x && z) {
            f << 0, -1, 1, 0;  // X * Z
        } else if (x) {
            f << 0, 1, 1, 0;
        } else if (z) {
            f << 1, 0, 0, -1;
        } else {
            f = Mat::Identity(2, 2);
        }
        out = kron(out, f);
    }
    return phase_value(p.phase) * out;
}

StabilizerGroup make_stabilizer_group(int n, std::vector<PauliOperator> generators) {
    for (const auto& g : generators)
        if (g.n != n) throw Error("SizeMismatch", "generator qubit count differs from group");
    for (size_t i = 0; i < generators.size(); ++i)
        for (size_t j = i + 1; j < generators.size(); ++j)
            if (!pauli_commutes(generators[i], generators[j]))
                throw Error("InvalidGroup", "generators " + std::to_string(i) + " and " +
                                                std::to_string(j) + " anti-commute");
    auto rows = bit_rows(generators, n);
    if (gf2_rank(rows) != static_cast<int>(generators.size()))
        throw Error("InvalidGroup", "generators are dependent over GF(2)");
    // With independent generators, -I is in the group exactly when some
    // generator squares to -I, i.e. has odd phase-plus-overlap parity.
    for (size_t i = 0; i < generators.size(); ++i)
        if ((generators[i].phase + xz_overlap(generators[i])) % 2 != 0)
            throw Error("InvalidGroup",
                        "generator " + std::to_string(i) + " squares to -I, so -I is in the group");
    StabilizerGroup s;
    s.n = n;
    s.generators = std::move(generators);
    return s;
}

StabilizerGroup parse_stabilizer_group(const std::string& comma_separated) {
    std::vector<PauliOperator> gens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            gens.push_back(pauli_parse(cur));
            cur.clear();
        }
    };
    for (char c : comma_separated) {
        if (c == ',') flush();
        else if (c != ' ') cur += c;
    }
    flush();
    if (gens.empty()) throw Error("ParseError", "no generators given");
    int n = gens[0].n;
    return make_stabilizer_group(n, std::move(gens));
}

Mat stabilizer_projection(const StabilizerGroup& s, int cap) {
    if (s.n > cap)
        throw Error("TooLarge", "dense realization capped at " + std::to_string(cap) + " qubits");
    Eigen::Index dim = Eigen::Index(1) << s.n;
    Mat p = Mat::Identity(dim, dim);
    for (const auto& g : s.generators)
        p = p * 0.5 * (Mat::Identity(dim, dim) + pauli_to_matrix(g, cap));
    return p;
}

ErrorClass classify_error(const StabilizerGroup& s, const PauliOperator& e) {
    if (e.n != s.n) throw Error("SizeMismatch", "error qubit count differs from group");
    for (const auto& g : s.generators)
        if (!pauli_commutes(e, g)) return ErrorClass::Detectable;
    std::vector<bool> row(2 * s.n);
    for (int q = 0; q < s.n; ++q) {
        row[q] = e.x_bits[q];
        row[s.n + q] = e.z_bits[q];
    }
    // Phases are absorbed by <S, iI>, so membership is a GF(2) span question.
    if (in_gf2_span(bit_rows(s.generators, s.n), row)) return ErrorClass::StabilizerCoset;
    return ErrorClass::Logical;
}

ErrorSetReport verify_error_set(const StabilizerGroup& s, const std::vector<PauliOperator>& errors,
                           const Tolerance& tol) {
    double thr = tol.threshold(1.0);
    Mat p_c = stabilizer_projection(s);
    std::vector<Mat> dense;
    for (const auto& e : errors) dense.push_back(pauli_to_matrix(e));

    ErrorSetReport rep;
    auto projs = range_projections(dense, p_c, tol);
    if (projs.size() >= 2) {
        rep.isoclinic = isoclinic_family_check(projs, tol).verdict;
    } else {
        rep.isoclinic = true;
    }

    int n = static_cast<int>(errors.size());
    rep.pair_classes.assign(n, std::vector<ErrorClass>(n, ErrorClass::StabilizerCoset));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            rep.pair_classes[i][j] =
                classify_error(s, pauli_mul(pauli_adjoint(errors[i]), errors[j]));

    auto witness = kl_general_check(dense, p_c, tol);
    if (!witness) {
        rep.consistent = false;
        return rep;
    }

    Subspace code = orthonormal_basis(p_c, tol);
    rep.consistent = rep.isoclinic;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double lam = std::abs(witness->lambdas(i, j));
            Mat ur = code.basis.adjoint() * witness->unitaries[i][j] * code.basis;
            Complex tr = ur.trace();
            Complex ph = std::abs(tr) > thr ? tr / std::abs(tr) : Complex{1.0, 0.0};
            bool trivial =
                spectral_norm(ur - ph * Mat::Identity(ur.rows(), ur.cols())) <= 0.5;
            bool nontrivial_witness = lam > thr && !trivial;
            if (nontrivial_witness) rep.kl_nontrivial_pairs.emplace_back(i, j);
            switch (rep.pair_classes[i][j]) {
                case ErrorClass::Logical:
                    if (!nontrivial_witness) rep.consistent = false;
                    break;
                case ErrorClass::Detectable:
                    if (lam > thr) rep.consistent = false;
                    break;
                case ErrorClass::StabilizerCoset:
                    if (lam <= thr || !trivial) rep.consistent = false;
                    break;
            }
        }
    }
    return rep;
}

}  // namespace isokl
