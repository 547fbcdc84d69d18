#pragma once

#include <array>
#include <optional>

namespace qkdrates {

// Single-qubit Pauli error probabilities ordered (I, X, Y, Z).
struct PauliDist {
    double p_I = 1.0;
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;

    std::array<double, 4> as_array() const { return {p_I, p_x, p_y, p_z}; }
};

enum class ProtocolKind { BB84, SixState };

PauliDist make_pauli_dist(double p_I, double p_x, double p_y, double p_z);

PauliDist depolarizing(double p);

// Bell-diagonal distribution certified by parameter estimation at bit-error
// rate p.  For BB84 the unobserved Y weight t defaults to p^2.
PauliDist effective_dist(ProtocolKind kind, double p, std::optional<double> t = std::nullopt);

// Feasible range of t for BB84 at bit-error rate p.
std::array<double, 2> bb84_t_interval(double p);

}  // namespace qkdrates
