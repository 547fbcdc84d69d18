#include "qkdrates/keyrates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "qkdrates/core_math.hpp"
#include "qkdrates/errors.hpp"
#include "qkdrates/parallel.hpp"
#include "qkdrates/schur_qubit.hpp"

namespace qkdrates {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_probability(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(what);
}

// k log x with 0 log 0 = 0.
double klog(int k, double x) {
    if (k == 0) return 0.0;
    return x > 0.0 ? k * std::log(x) : kNegInf;
}

// w (P0 + P1) H2(P0 / (P0 + P1)) from logarithms of w, P0 and P1.
double weighted_h2(double log_w, double log_p0, double log_p1) {
    const double mx = std::max(log_p0, log_p1);
    if (mx == kNegInf || log_w == kNegInf) return 0.0;
    const double a = std::exp(log_p0 - mx);
    const double b = std::exp(log_p1 - mx);
    return std::exp(log_w + mx + std::log(a + b)) * binary_entropy(a / (a + b));
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXd kron_power(const Eigen::MatrixXd& a, int n) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (int i = 0; i < n; ++i) out = kron(out, a);
    return out;
}

// Z on every qubit of an m-qubit operator: entries pick up (-1)^(|i| + |j|).
Eigen::MatrixXd z_conjugate_all(const Eigen::MatrixXd& a) {
    Eigen::MatrixXd out = a;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if ((std::popcount(static_cast<unsigned long>(i)) + std::popcount(static_cast<unsigned long>(j))) & 1)
                out(i, j) = -out(i, j);
    return out;
}

}  // namespace

Eigen::Matrix2d rho_pq(double p, double q) {
    require_probability(p, "rho_pq: p outside [0,1]");
    require_probability(q, "rho_pq: q outside [0,1]");
    const double off = (1.0 - 2.0 * q) * std::sqrt(p * (1.0 - p));
    Eigen::Matrix2d r;
    r << 1.0 - p, off, off, p;
    return r;
}

double mutual_info_xy(int m, double pt) {
    if (m < 1) throw DomainError("mutual_info_xy: m must be positive");
    require_probability(pt, "mutual_info_xy: p_tilde outside [0,1]");
    std::vector<double> terms(m);
    for (int s = 0; s < m; ++s) {
        const double lp0 = klog(s, pt) + klog(m - s, 1.0 - pt);
        const double lp1 = klog(m - s, pt) + klog(s, 1.0 - pt);
        terms[s] = weighted_h2(log_binomial(m - 1, s), lp0, lp1);
    }
    return 1.0 - pairwise_sum(terms);
}

RateResult bb84_rate(int m, double p, double q) {
    if (m < 1) throw DomainError("bb84_rate: m must be positive");
    require_probability(p, "bb84_rate: p outside [0,1]");
    require_probability(q, "bb84_rate: q outside [0,1]");
    const PreprocParams pp{p, q, 0.0};
    const BlochPair bp = make_bloch_pair(p, q);
    RateResult r;
    r.params = pp;
    r.block_size = m;
    r.i_xy = mutual_info_xy(m, pp.p_tilde());
    r.i_xe = mix_entropy_z_pair(m, 0.5, 0.5, bp) - m * binary_entropy(bp.rho1());
    r.rate = (r.i_xy - r.i_xe) / m;
    return r;
}

RateResult sixstate_rate(int m, double p, double q) {
    if (m < 1) throw DomainError("sixstate_rate: m must be positive");
    if (!(p >= 0.0 && p < 2.0 / 3.0)) throw DomainError("sixstate_rate: p outside [0, 2/3)");
    require_probability(q, "sixstate_rate: q outside [0,1]");
    const PreprocParams pp{p, q, 0.0};
    const BlochPair bp = make_bloch_pair(pp.p_prime(), q);
    const double h_state = binary_entropy(bp.rho1());
    const double h_q = binary_entropy(q);

    // Terms whose total weight is this small change I(X:E) by < 1e-15.
    constexpr double kWeightCutoff = 1e-18;

    std::vector<double> u_terms(m + 1, 0.0);
    parallel_for(static_cast<std::size_t>(m + 1), [&](std::size_t ui) {
        const int u = static_cast<int>(ui);
        const double log_pu = log_binomial(m, u) + klog(u, p) + klog(m - u, 1.0 - p);
        if (log_pu == kNegInf || std::exp(log_pu) < kWeightCutoff) return;
        const int n = m - u;
        // Weights for strings with k ones among the u sigma factors; k and
        // u-k give swapped weights and equal entropies.
        std::vector<std::pair<double, double>> weights;
        std::vector<double> mult;
        for (int k = 0; 2 * k <= u; ++k) {
            const double lw1 = klog(k, q) + klog(u - k, 1.0 - q) - std::log(2.0);
            const double lw2 = klog(k, 1.0 - q) + klog(u - k, q) - std::log(2.0);
            const double w1 = std::exp(lw1), w2 = std::exp(lw2);
            const double c = std::exp(log_binomial(u, k)) * (2 * k == u ? 1.0 : 2.0);
            const double total = c * (w1 + w2);
            if (total < kWeightCutoff * 1e-3) continue;
            weights.emplace_back(w1, w2);
            mult.push_back(c);
        }
        std::vector<double> ent(weights.size());
        if (n == 0) {
            for (std::size_t i = 0; i < weights.size(); ++i)
                ent[i] = neg_xlog2x(weights[i].first + weights[i].second);
        } else {
            ent = mix_entropy_z_pair_many(n, weights, bp);
        }
        std::vector<double> parts(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i) parts[i] = mult[i] * ent[i];
        const double bracket = pairwise_sum(parts) - u * h_q - n * h_state;
        u_terms[ui] = std::exp(log_pu) * bracket;
    });

    RateResult r;
    r.params = pp;
    r.block_size = m;
    r.i_xy = mutual_info_xy(m, pp.p_tilde());
    r.i_xe = pairwise_sum(u_terms);
    r.rate = (r.i_xy - r.i_xe) / m;
    return r;
}

double rate_q0(ProtocolKind kind, int m, double p) {
    if (m < 1) throw DomainError("rate_q0: m must be positive");
    return (1.0 - cat_conditional_entropy(m, effective_dist(kind, p))) / m;
}

RateResult bb84_rate_general_t(int m, double p, double q, double t) {
    if (m < 1 || m > 3) throw DomainError("general-t BB84 rate is limited to m <= 3");
    require_probability(q, "bb84_rate_general_t: q outside [0,1]");
    effective_dist(ProtocolKind::BB84, p, t);  // validates t
    const double pv[2] = {p < 1.0 ? (p - t) / (1.0 - p) : 0.0, p > 0.0 ? t / p : 0.0};
    const int dim = 1 << m;
    KahanSum ixe;
    for (int u = 0; u < dim; ++u) {
        double pu = 1.0;
        Eigen::VectorXd psi = Eigen::VectorXd::Ones(1);
        for (int i = 0; i < m; ++i) {
            const int ui = (u >> (m - 1 - i)) & 1;
            pu *= ui ? p : 1.0 - p;
            const double v1 = std::clamp(pv[ui], 0.0, 1.0);
            Eigen::VectorXd next(psi.size() * 2);
            for (Eigen::Index k = 0; k < psi.size(); ++k) {
                next(2 * k) = psi(k) * std::sqrt(1.0 - v1);
                next(2 * k + 1) = psi(k) * std::sqrt(v1);
            }
            psi = next;
        }
        if (pu == 0.0) continue;
        Eigen::MatrixXd rho0 = psi * psi.transpose();
        for (int i = 0; i < m; ++i) {
            const int bit = m - 1 - i;
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b)
                    if (((a >> bit) & 1) != ((b >> bit) & 1)) rho0(a, b) *= 1.0 - 2.0 * q;
        }
        const Eigen::MatrixXd rho1 = z_conjugate_all(rho0);
        const Eigen::MatrixXd avg = 0.5 * (rho0 + rho1);
        ixe.add(pu * (von_neumann_entropy(avg) - von_neumann_entropy(rho0)));
    }
    RateResult r;
    r.params = {p, q, 0.0};
    r.block_size = m;
    r.i_xy = mutual_info_xy(m, r.params.p_tilde());
    r.i_xe = ixe.value();
    r.rate = (r.i_xy - r.i_xe) / m;
    return r;
}

AuditResult bb84_audit(int m, double p, double q) {
    const auto [lo, hi] = bb84_t_interval(p);
    AuditResult a;
    a.min_rate = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 100; ++i) {
        const double t = lo + (hi - lo) * i / 100.0;
        const double r = bb84_rate_general_t(m, p, q, t).rate;
        if (r < a.min_rate) {
            a.min_rate = r;
            a.argmin_t = t;
        }
    }
    a.independent_rate = bb84_rate_general_t(m, p, q, p * p).rate;
    return a;
}

double mutual_info_xy_iter(int m1, int m2, double pt, double Q, double class_budget) {
    if (m1 < 1 || m2 < 1) throw DomainError("mutual_info_xy_iter: block sizes must be positive");
    require_probability(pt, "mutual_info_xy_iter: p_tilde outside [0,1]");
    require_probability(Q, "mutual_info_xy_iter: Q outside [0,1]");
    // Classes: S in [0, m2-1] times weight compositions of the two groups.
    double count = 0.0;
    for (int S = 0; S < m2; ++S)
        count += std::exp(log_binomial(m2 - S + m1 - 1, m1 - 1) + log_binomial(S + m1 - 1, m1 - 1));
    if (count > class_budget) throw BudgetError("iterated syndrome class count exceeds budget");

    // Block factors: log g0(s), log g1(s).
    std::vector<double> lg0(m1), lg1(m1), lc(m1);
    auto log_mix = [](double la, double lb, double wa, double wb) {
        const double x = (wa > 0.0 && la != kNegInf) ? std::log(wa) + la : kNegInf;
        const double y = (wb > 0.0 && lb != kNegInf) ? std::log(wb) + lb : kNegInf;
        const double mx = std::max(x, y);
        if (mx == kNegInf) return kNegInf;
        return mx + std::log(std::exp(x - mx) + std::exp(y - mx));
    };
    for (int s = 0; s < m1; ++s) {
        const double keep = klog(m1 - s, 1.0 - pt) + klog(s, pt);
        const double flip = klog(m1 - s, pt) + klog(s, 1.0 - pt);
        lg0[s] = log_mix(keep, flip, 1.0 - Q, Q);
        lg1[s] = log_mix(flip, keep, 1.0 - Q, Q);
        lc[s] = log_binomial(m1 - 1, s);
    }

    struct Group {
        double log_mult;  // multinomial times inner multiplicities
        double l_same;    // sum c_s log g0(s) for the S_i = 0 group
        double l_other;   // sum c_s log g1(s)
    };
    // All weight compositions of `size` blocks, with their log factors.
    auto compositions = [&](int size) {
        std::vector<Group> out;
        std::vector<int> c(m1, 0);
        std::function<void(int, int)> rec = [&](int j, int remaining) {
            if (j == m1 - 1) {
                c[j] = remaining;
                Group g{std::lgamma(size + 1.0), 0.0, 0.0};
                for (int s = 0; s < m1; ++s) {
                    g.log_mult += c[s] * lc[s] - std::lgamma(c[s] + 1.0);
                    if (c[s]) {
                        g.l_same += c[s] * lg0[s];
                        g.l_other += c[s] * lg1[s];
                    }
                }
                out.push_back(g);
                return;
            }
            for (int a = 0; a <= remaining; ++a) {
                c[j] = a;
                rec(j + 1, remaining - a);
            }
        };
        rec(0, size);
        return out;
    };

    std::vector<double> per_s(m2, 0.0);
    for (int S = 0; S < m2; ++S) {
        const auto zero_group = compositions(m2 - S);
        const auto one_group = compositions(S);
        KahanSum sum;
        for (const auto& c : zero_group)
            for (const auto& a : one_group) {
                const double lw = log_binomial(m2 - 1, S) + c.log_mult + a.log_mult;
                const double l0 = c.l_same + a.l_other;
                const double l1 = c.l_other + a.l_same;
                sum.add(weighted_h2(lw, l0, l1));
            }
        per_s[S] = sum.value();
    }
    return 1.0 - pairwise_sum(per_s);
}

RateResult bb84_iter_rate(int m1, int m2, double p, double q, double Q, EntropyPath path, double schur_budget) {
    if (m1 < 1 || m2 < 1) throw DomainError("bb84_iter_rate: block sizes must be positive");
    require_probability(p, "bb84_iter_rate: p outside [0,1]");
    require_probability(q, "bb84_iter_rate: q outside [0,1]");
    require_probability(Q, "bb84_iter_rate: Q outside [0,1]");
    const PreprocParams pp{p, q, Q};
    const BlochPair bp = make_bloch_pair(p, q);
    const double s_a = mix_entropy_z_pair(m1, 1.0 - Q, Q, bp);

    double s_mix = 0.0;
    if (m2 == 1) {
        // (A + B)/2 is the equal mixture of rho^(x)m1 and its Z conjugate.
        s_mix = mix_entropy_z_pair(m1, 0.5, 0.5, bp);
    } else {
        if (m1 > 12) throw UnsupportedRangeError("inner block too large for the iterated entropy");
        const Eigen::MatrixXd rho = rho_pq(p, q);
        const Eigen::MatrixXd sigma = z_conjugate_all(rho);
        const Eigen::MatrixXd a = (1.0 - Q) * kron_power(rho, m1) + Q * kron_power(sigma, m1);
        const Eigen::MatrixXd b = z_conjugate_all(a);
        const bool dense = path == EntropyPath::Dense;
        if (dense) {
            if (m1 * m2 > 12) throw UnsupportedRangeError("dense iterated entropy is limited to m1*m2 <= 12");
            const Eigen::MatrixXd full = 0.5 * (kron_power(a, m2) + kron_power(b, m2));
            s_mix = von_neumann_entropy(full);
        } else {
            if (m2 >= kMaxSites) throw UnsupportedRangeError("Schur path requires m2 < 15");
            const SchurBasis& basis = cached_schur_basis(m2, 1 << m1, schur_budget);
            s_mix = tensor_power_mixture_entropy(basis, {0.5, 0.5}, {a.cast<std::complex<double>>(), b.cast<std::complex<double>>()});
        }
    }

    RateResult r;
    r.params = pp;
    r.block_size = m1 * m2;
    r.i_xy = mutual_info_xy_iter(m1, m2, pp.p_tilde(), Q);
    r.i_xe = s_mix - m2 * s_a;
    r.rate = (r.i_xy - r.i_xe) / (m1 * m2);
    return r;
}

}  // namespace qkdrates
