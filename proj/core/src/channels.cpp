#include "qkdrates/channels.hpp"

#include <algorithm>
#include <cmath>

#include "qkdrates/errors.hpp"

namespace qkdrates {

namespace {

constexpr double kTol = 1e-12;

void require_probability(double p, const char* what) {
    if (!(p >= -kTol && p <= 1.0 + kTol)) throw DomainError(what);
}

}  // namespace

PauliDist make_pauli_dist(double p_I, double p_x, double p_y, double p_z) {
    for (double v : {p_I, p_x, p_y, p_z}) require_probability(v, "PauliDist entry outside [0,1]");
    if (std::abs(p_I + p_x + p_y + p_z - 1.0) > kTol) throw DomainError("PauliDist does not sum to 1");
    return {std::max(p_I, 0.0), std::max(p_x, 0.0), std::max(p_y, 0.0), std::max(p_z, 0.0)};
}

PauliDist depolarizing(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing: p outside [0,1]");
    return {1.0 - p, p / 3.0, p / 3.0, p / 3.0};
}

std::array<double, 2> bb84_t_interval(double p) {
    return {std::max(0.0, 2.0 * p - 1.0), p};
}

PauliDist effective_dist(ProtocolKind kind, double p, std::optional<double> t) {
    if (kind == ProtocolKind::SixState) {
        if (!(p >= 0.0 && p <= 2.0 / 3.0)) throw DomainError("effective_dist: 6-state p outside [0,2/3]");
        return {1.0 - 1.5 * p, 0.5 * p, 0.5 * p, 0.5 * p};
    }
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("effective_dist: BB84 p outside [0,1]");
    const double tt = t.value_or(p * p);
    const auto [lo, hi] = bb84_t_interval(p);
    if (!(tt >= lo - kTol && tt <= hi + kTol)) throw DomainError("effective_dist: t outside feasible interval");
    return {1.0 - 2.0 * p + tt, p - tt, tt, p - tt};
}

}  // namespace qkdrates
