#pragma once

#include <string>
#include <vector>

#include "isokl/types.hpp"

namespace isokl {

/// n-qubit Pauli in symplectic form: i^phase * prod_q X^x_q Z^z_q, with the
/// convention Y = i * X * Z per qubit and phases tracked mod 4.
struct PauliOperator {
    int n = 0;
    int phase = 0;  // power of i, mod 4
    std::vector<bool> x_bits;
    std::vector<bool> z_bits;

    bool operator==(const PauliOperator&) const = default;
};

enum class ErrorClass { StabilizerCoset, Logical, Detectable };

const char* to_string(ErrorClass c);

/// Abelian Pauli subgroup not containing -I. Validated on construction via
/// make_stabilizer_group.
struct StabilizerGroup {
    int n = 0;
    std::vector<PauliOperator> generators;
};

struct ErrorSetReport {
    bool isoclinic = false;
    std::vector<std::vector<ErrorClass>> pair_classes;
    std::vector<std::pair<int, int>> kl_nontrivial_pairs;
    bool consistent = false;
};

/// Grammar: optional prefix in {+, -, +i, -i} then one or more of I,X,Y,Z.
PauliOperator pauli_parse(const std::string& s);

std::string pauli_format(const PauliOperator& p);

PauliOperator pauli_mul(const PauliOperator& p, const PauliOperator& q);

PauliOperator pauli_adjoint(const PauliOperator& p);

bool pauli_commutes(const PauliOperator& p, const PauliOperator& q);

bool pauli_is_hermitian(const PauliOperator& p);

/// Dense 2^n x 2^n realization, entries exactly in {0, +-1, +-i}.
/// Throws Error("TooLarge") above the cap (default 12 qubits).
Mat pauli_to_matrix(const PauliOperator& p, int cap = 12);

/// Validates commutation, GF(2) independence, and absence of -I.
/// Throws Error("InvalidGroup") naming the failed invariant.
StabilizerGroup make_stabilizer_group(int n, std::vector<PauliOperator> generators);

StabilizerGroup parse_stabilizer_group(const std::string& comma_separated);

/// P_C = prod over generators of (I + G)/2.
Mat stabilizer_projection(const StabilizerGroup& s, int cap = 12);

ErrorClass classify_error(const StabilizerGroup& s, const PauliOperator& e);

ErrorSetReport verify_error_set(const StabilizerGroup& s, const std::vector<PauliOperator>& errors,
                           const Tolerance& tol);

}  // namespace isokl
