#include "qkdrates/capacity.hpp"

#include <cmath>

#include "qkdrates/core_math.hpp"
#include "qkdrates/errors.hpp"
#include "qkdrates/optimize.hpp"

namespace qkdrates {

double hashing_rate(const PauliDist& dist) {
    const auto p = dist.as_array();
    return 1.0 - shannon_entropy(p, 2.0);
}

double one_shot_capacity(const PauliDist& dist) {
    // Coherent information of the maximally entangled input: S(B) = 1 for a
    // unital channel and S(RB) is the entropy of the Bell-diagonal output.
    const HermitianMatrix bell = HermitianMatrix(Eigen::Vector4cd(dist.p_I, dist.p_x, dist.p_y, dist.p_z).asDiagonal());
    return 1.0 - von_neumann_entropy(bell);
}

double cat_rate(int m, const PauliDist& dist) {
    return (1.0 - cat_conditional_entropy(m, dist)) / m;
}

double conc_rate(const CapacityQuery& q) {
    const double h = conccat_conditional_entropy(q.m1, q.m2, q.dist, q.class_budget);
    return (1.0 - h) / (static_cast<double>(q.m1) * q.m2);
}

double pmax_capacity(int m1, int m2, double tol, double class_budget) {
    auto rate = [&](double p) { return conc_rate({m1, m2, depolarizing(p), class_budget}); };
    BracketSpec bracket;
    bracket.lo = 1e-4;
    bracket.hi = 0.25;
    bracket.hi_extended = 0.4;
    return bisect_threshold(rate, bracket, tol);
}

}  // namespace qkdrates
