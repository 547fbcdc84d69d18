#pragma once

#include <Eigen/Dense>

#include "qkdrates/channels.hpp"
#include "qkdrates/repcodes.hpp"
#include "qkdrates/schur_efm.hpp"

namespace qkdrates {

struct PreprocParams {
    double p = 0.0;
    double q = 0.0;
    double Q = 0.0;

    double p_tilde() const { return p * (1.0 - q) + (1.0 - p) * q; }
    double p_prime() const { return p / (2.0 * (1.0 - p)); }
    double q_tot() const { return q * (1.0 - Q) + (1.0 - q) * Q; }
};

// Secret bits per sifted key bit; rate = (i_xy - i_xe) / block_size.
struct RateResult {
    double rate = 0.0;
    double i_xy = 0.0;
    double i_xe = 0.0;
    PreprocParams params;
    int block_size = 1;
};

double mutual_info_xy(int m, double p_tilde);

RateResult bb84_rate(int m, double p, double q);
RateResult sixstate_rate(int m, double p, double q);

double rate_q0(ProtocolKind kind, int m, double p);

// Rate at a general Y-error weight t, from dense m-qubit states (m <= 3).
RateResult bb84_rate_general_t(int m, double p, double q, double t);

struct AuditResult {
    double min_rate = 0.0;
    double argmin_t = 0.0;
    double independent_rate = 0.0;  // rate at t = p^2
};

// Minimum of bb84_rate_general_t over 101 values of t.
AuditResult bb84_audit(int m, double p, double q);

double mutual_info_xy_iter(int m1, int m2, double p_tilde, double Q, double class_budget = kDefaultClassBudget);

enum class EntropyPath { Auto, Dense, Schur };

RateResult bb84_iter_rate(int m1, int m2, double p, double q, double Q, EntropyPath path = EntropyPath::Auto,
                          double schur_budget = kDefaultSchurBudget);

// The single-qubit state (1-q)[phi+] + q[phi-] with phi+- = sqrt(1-p)|0> +- sqrt(p)|1>.
Eigen::Matrix2d rho_pq(double p, double q);

}  // namespace qkdrates
