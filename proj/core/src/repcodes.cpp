#include "qkdrates/repcodes.hpp"

#include <array>
#include <cmath>

#include "qkdrates/core_math.hpp"
#include "qkdrates/errors.hpp"
#include "qkdrates/parallel.hpp"

namespace qkdrates {

std::vector<CatSyndromeClass> cat_classes(int m) {
    if (m < 1) throw DomainError("cat code size must be at least 1");
    std::vector<CatSyndromeClass> out;
    out.reserve(m);
    for (int s = 0; s < m; ++s) out.push_back({m, s, std::exp(log_binomial(m - 1, s))});
    return out;
}

double cat_joint(LogicalError l, const CatSyndromeClass& cls, const PauliDist& d) {
    const int m = cls.m;
    const int s = cls.weight;
    if (s < 0 || s >= m) throw DomainError("cat syndrome weight outside [0, m-1]");
    const int a = l.lx * (m - 2 * s) + s;
    const int b = (1 - l.lx) * (m - 2 * s) + s;
    const double sign = l.lz ? -1.0 : 1.0;
    return 0.5 * (ipow(d.p_x + d.p_y, a) * ipow(1.0 - d.p_x - d.p_y, b) +
                  sign * ipow(d.p_x - d.p_y, a) * ipow(1.0 - d.p_x - d.p_y - 2.0 * d.p_z, b));
}

namespace {

// Contribution -sum_l P(l,s) log2 P(l|s) of one syndrome string.
double syndrome_term(const std::array<double, 4>& p) {
    double ps = 0.0;
    double h = 0.0;
    for (double x : p) {
        const double v = x > 0.0 ? x : 0.0;
        ps += v;
        h += neg_xlog2x(v);
    }
    return h - neg_xlog2x(ps);
}

}  // namespace

double cat_conditional_entropy(int m, const PauliDist& dist) {
    KahanSum total;
    for (const auto& cls : cat_classes(m)) {
        std::array<double, 4> p{};
        for (int i = 0; i < 4; ++i) p[i] = cat_joint(kAllLogicalErrors[i], cls, dist);
        total.add(cls.multiplicity * syndrome_term(p));
    }
    return total.value();
}

F01 f0_f1(int lz, int alpha, int beta, int m1, const PauliDist& d) {
    if (beta < 0 || beta > m1) throw DomainError("f0_f1: beta outside [0, m1]");
    const double sign = ((lz + alpha) & 1) ? -1.0 : 1.0;
    const double sxy = d.p_x + d.p_y;
    const double dxy = d.p_x - d.p_y;
    const double e = 1.0 - sxy;
    const double ez = 1.0 - sxy - 2.0 * d.p_z;
    F01 f;
    f.f0 = 0.5 * (ipow(sxy, beta) * ipow(e, m1 - beta) + sign * ipow(dxy, beta) * ipow(ez, m1 - beta));
    f.f1 = 0.5 * (ipow(e, beta) * ipow(sxy, m1 - beta) + sign * ipow(ez, beta) * ipow(dxy, m1 - beta));
    return f;
}

double ConcSyndromeClass::multiplicity() const { return std::exp(log_multiplicity); }

ConcSyndromeClass make_conc_class(int m1, int m2, int beta1, std::vector<int> freq) {
    if (m1 < 1 || m2 < 1) throw DomainError("block sizes must be at least 1");
    if (beta1 < 0 || beta1 >= m1) throw DomainError("beta1 outside [0, m1-1]");
    if (static_cast<int>(freq.size()) != 2 * m1) throw DomainError("frequency vector must have 2*m1 entries");
    ConcSyndromeClass c{m1, m2, beta1, std::move(freq), 0.0};
    double lm = log_binomial(m1 - 1, beta1) + log_multinomial(m2 - 1, c.freq);
    for (int j = 0; j < 2 * m1; ++j) lm += c.freq[j] * log_binomial(m1 - 1, j % m1);
    c.log_multiplicity = lm;
    return c;
}

double conccat_joint(LogicalError l, const ConcSyndromeClass& cls, const PauliDist& dist) {
    const F01 first = f0_f1(l.lz, 0, cls.beta1, cls.m1, dist);
    double plus = first.f0 + first.f1;
    double minus = first.f0 - first.f1;
    for (int j = 0; j < 2 * cls.m1; ++j) {
        if (cls.freq[j] == 0) continue;
        const F01 f = f0_f1(l.lz, j / cls.m1, j % cls.m1, cls.m1, dist);
        plus *= ipow(f.f0 + f.f1, cls.freq[j]);
        minus *= ipow(f.f0 - f.f1, cls.freq[j]);
    }
    return 0.5 * (plus + (l.lx ? -minus : minus));
}

std::uint64_t conc_class_count(int m1, int m2) {
    if (m1 < 1 || m2 < 1) throw DomainError("block sizes must be at least 1");
    return static_cast<std::uint64_t>(m1) * binomial(m2 - 1 + 2 * m1 - 1, m2 - 1);
}

void for_each_conc_class(int m1, int m2, const std::function<void(const ConcSyndromeClass&)>& fn) {
    const int types = 2 * m1;
    std::vector<int> freq(types, 0);
    std::function<void(int, int, int)> rec = [&](int beta1, int j, int remaining) {
        if (j == types - 1) {
            freq[j] = remaining;
            fn(make_conc_class(m1, m2, beta1, freq));
            return;
        }
        for (int a = 0; a <= remaining; ++a) {
            freq[j] = a;
            rec(beta1, j + 1, remaining - a);
        }
    };
    for (int beta1 = 0; beta1 < m1; ++beta1) rec(beta1, 0, m2 - 1);
}

namespace {

struct ConcTables {
    int m1 = 0;
    int m2 = 0;
    int types = 0;
    // pow_plus[lz][j][a] = (F0+F1)^a for type j, likewise pow_minus.
    std::array<std::vector<std::vector<double>>, 2> pow_plus;
    std::array<std::vector<std::vector<double>>, 2> pow_minus;
    std::vector<double> log_c;
    std::vector<double> log_fact;
};

struct Partial {
    double plus[2];
    double minus[2];
    double log_mult;
};

void conc_recurse(const ConcTables& t, int j, int remaining, const Partial& acc, KahanSum& sum) {
    const bool last = (j == t.types - 1);
    const int lo = last ? remaining : 0;
    for (int a = lo; a <= remaining; ++a) {
        Partial next = acc;
        for (int lz = 0; lz < 2; ++lz) {
            next.plus[lz] *= t.pow_plus[lz][j][a];
            next.minus[lz] *= t.pow_minus[lz][j][a];
        }
        next.log_mult += a * t.log_c[j] - t.log_fact[a];
        if (last) {
            std::array<double, 4> p{};
            for (int lx = 0; lx < 2; ++lx)
                for (int lz = 0; lz < 2; ++lz)
                    p[2 * lx + lz] = 0.5 * (next.plus[lz] + (lx ? -next.minus[lz] : next.minus[lz]));
            sum.add(std::exp(next.log_mult) * syndrome_term(p));
        } else {
            conc_recurse(t, j + 1, remaining - a, next, sum);
        }
    }
}

}  // namespace

double conccat_conditional_entropy(int m1, int m2, const PauliDist& dist, double class_budget) {
    if (m1 < 1 || m2 < 1) throw DomainError("block sizes must be at least 1");
    if (static_cast<double>(conc_class_count(m1, m2)) > class_budget)
        throw BudgetError("concatenated cat code class count exceeds budget");

    ConcTables t;
    t.m1 = m1;
    t.m2 = m2;
    t.types = 2 * m1;
    t.log_c.resize(t.types);
    for (int j = 0; j < t.types; ++j) t.log_c[j] = log_binomial(m1 - 1, j % m1);
    t.log_fact.resize(m2);
    for (int a = 0; a < m2; ++a) t.log_fact[a] = std::lgamma(a + 1.0);
    for (int lz = 0; lz < 2; ++lz) {
        t.pow_plus[lz].assign(t.types, std::vector<double>(m2, 1.0));
        t.pow_minus[lz].assign(t.types, std::vector<double>(m2, 1.0));
        for (int j = 0; j < t.types; ++j) {
            const F01 f = f0_f1(lz, j / m1, j % m1, m1, dist);
            for (int a = 1; a < m2; ++a) {
                t.pow_plus[lz][j][a] = t.pow_plus[lz][j][a - 1] * (f.f0 + f.f1);
                t.pow_minus[lz][j][a] = t.pow_minus[lz][j][a - 1] * (f.f0 - f.f1);
            }
        }
    }

    // One work item per (beta1, count of the first type).
    const std::size_t items = static_cast<std::size_t>(m1) * m2;
    std::vector<double> partial(items, 0.0);
    parallel_for(items, [&](std::size_t item) {
        const int beta1 = static_cast<int>(item / m2);
        const int a0 = static_cast<int>(item % m2);
        const int remaining = m2 - 1;
        Partial acc{};
        for (int lz = 0; lz < 2; ++lz) {
            const F01 f = f0_f1(lz, 0, beta1, m1, dist);
            acc.plus[lz] = (f.f0 + f.f1) * t.pow_plus[lz][0][a0];
            acc.minus[lz] = (f.f0 - f.f1) * t.pow_minus[lz][0][a0];
        }
        acc.log_mult = log_binomial(m1 - 1, beta1) + t.log_fact[remaining] + a0 * t.log_c[0] - t.log_fact[a0];
        KahanSum sum;
        conc_recurse(t, 1, remaining - a0, acc, sum);
        partial[item] = sum.value();
    });
    return pairwise_sum(partial);
}

}  // namespace qkdrates
