#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qkdrates/channels.hpp"

namespace qkdrates {

struct LogicalError {
    int lx = 0;
    int lz = 0;
};

inline constexpr LogicalError kAllLogicalErrors[4] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};

// All syndromes of the [[m,1]] cat code with the same number of ones share
// one joint probability.
struct CatSyndromeClass {
    int m = 1;
    int weight = 0;
    double multiplicity = 1.0;  // C(m-1, weight)
};

std::vector<CatSyndromeClass> cat_classes(int m);

double cat_joint(LogicalError l, const CatSyndromeClass& cls, const PauliDist& dist);

// Sum over syndrome classes of mult * P(s) * H4(P(l|s)), in bits.
double cat_conditional_entropy(int m, const PauliDist& dist);

struct F01 {
    double f0 = 0.0;
    double f1 = 0.0;
};

F01 f0_f1(int lz, int alpha, int beta, int m1, const PauliDist& dist);

// Syndrome class of the [[m1 x m2, 1]] concatenated cat code.  The first
// inner block has alpha fixed to 0 and inner syndrome weight beta1; the other
// m2-1 blocks are summarized by how often each (alpha, beta) pair occurs.
// freq[alpha * m1 + beta] counts blocks with that pair.
struct ConcSyndromeClass {
    int m1 = 1;
    int m2 = 1;
    int beta1 = 0;
    std::vector<int> freq;
    double log_multiplicity = 0.0;

    double multiplicity() const;
};

ConcSyndromeClass make_conc_class(int m1, int m2, int beta1, std::vector<int> freq);

double conccat_joint(LogicalError l, const ConcSyndromeClass& cls, const PauliDist& dist);

// m1 * C(m2 - 1 + 2 m1 - 1, m2 - 1).
std::uint64_t conc_class_count(int m1, int m2);

// Visits every class in lexicographic order of (beta1, freq).
void for_each_conc_class(int m1, int m2, const std::function<void(const ConcSyndromeClass&)>& fn);

inline constexpr double kDefaultClassBudget = 1e8;

double conccat_conditional_entropy(int m1, int m2, const PauliDist& dist, double class_budget = kDefaultClassBudget);

}  // namespace qkdrates
