#pragma once

#include "qkdrates/channels.hpp"
#include "qkdrates/repcodes.hpp"

namespace qkdrates {

struct CapacityQuery {
    int m1 = 1;
    int m2 = 1;
    PauliDist dist;
    double class_budget = kDefaultClassBudget;
};

double hashing_rate(const PauliDist& dist);

// 1 - H4 written out as the single-letter coherent information of the
// Pauli channel; kept separate from hashing_rate as an independent path.
double one_shot_capacity(const PauliDist& dist);

double cat_rate(int m, const PauliDist& dist);
double conc_rate(const CapacityQuery& q);

// Depolarizing noise level at which conc_rate(m1, m2) changes sign.
double pmax_capacity(int m1, int m2, double tol = 1e-7, double class_budget = kDefaultClassBudget);

}  // namespace qkdrates
