#pragma once

// Brute-force reference computations used by the tests.  None of these call
// into the library's numerical paths; they rebuild each quantity from its
// definition by enumeration or dense linear algebra.

#include <array>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qkdrates/repcodes.hpp"

namespace oracle {

double entropy_bits(const Eigen::VectorXd& eigenvalues);
double dense_entropy(const Eigen::MatrixXd& a);
double dense_entropy(const Eigen::MatrixXcd& a);

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::MatrixXd kron_power(const Eigen::MatrixXd& a, int n);

// (1-q)|phi+><phi+| + q|phi-><phi-|, phi+- = sqrt(1-p)|0> +- sqrt(p)|1>.
Eigen::Matrix2d noisy_qubit(double p, double q);

// S(alpha rho^(x)n + beta (Z rho Z)^(x)n) by full diagonalization.
double dense_mix_entropy(int n, double alpha, double beta, double p, double q);

// exp(a) by Taylor series with scaling and squaring.
Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& a);

// Natural log of C(n, k) from the exact integer value.
double exact_log_binomial(int n, int k);

// Joint probabilities of (syndrome, logical error) for the m1 x m2
// concatenated cat code, by enumerating all 4^(m1 m2) Pauli strings and
// measuring the stabilizers directly.  Pauli letters are 0=I, 1=X, 2=Y, 3=Z.
// Syndrome layout: for each block b, m1-1 bits x_{b,1} ^ x_{b,j}; then m2-1
// bits zpar(block 1) ^ zpar(block j).  Entry index is 2*lx + lz.
using SyndromeTable = std::map<std::vector<int>, std::array<double, 4>>;
SyndromeTable enumerate_pauli_strings(int m1, int m2, const std::array<double, 4>& dist);

double table_conditional_entropy(const SyndromeTable& table);

// Library class label of one raw syndrome from the table above.
qkdrates::ConcSyndromeClass conc_class_of(const std::vector<int>& syndrome, int m1, int m2);

// Mutual informations of the m1 x m2 iterated preprocessing protocol (a
// single round when m2 = 1 and Q = 0) for the Bell-diagonal state with
// probabilities p_uv ordered (I, X, Y, Z).  Eve holds the purification,
// Alice measures Z, flips each bit with probability q, announces the inner
// parities, flips each block key bit with probability Q and announces the
// outer parities.  Both informations are in bits for the whole block.
struct RateOracle {
    double i_xy = 0.0;
    double i_xe = 0.0;
    double rate = 0.0;  // (i_xy - i_xe) / (m1 m2)
};
RateOracle purification_rate(int m1, int m2, const std::array<double, 4>& puv, double q, double Q);

// I(X:Y) of the same protocol from bit-error enumeration alone.
double enumerate_mutual_info_xy(int m1, int m2, double p_tilde, double Q);

}  // namespace oracle
