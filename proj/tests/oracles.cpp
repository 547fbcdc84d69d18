#include "oracles.hpp"

#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

namespace {

double eta(double x) { return x > 1e-300 ? -x * std::log2(x) : 0.0; }

}  // namespace

double entropy_bits(const Eigen::VectorXd& eigenvalues) {
    double h = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) h += eta(eigenvalues(i));
    return h;
}

double dense_entropy(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return entropy_bits(es.eigenvalues());
}

double dense_entropy(const Eigen::MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a, Eigen::EigenvaluesOnly);
    return entropy_bits(es.eigenvalues());
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Eigen::MatrixXd kron_power(const Eigen::MatrixXd& a, int n) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (int i = 0; i < n; ++i) out = kron(out, a);
    return out;
}

Eigen::Matrix2d noisy_qubit(double p, double q) {
    Eigen::Vector2d plus(std::sqrt(1.0 - p), std::sqrt(p));
    Eigen::Vector2d minus(std::sqrt(1.0 - p), -std::sqrt(p));
    return (1.0 - q) * plus * plus.transpose() + q * minus * minus.transpose();
}

double dense_mix_entropy(int n, double alpha, double beta, double p, double q) {
    const Eigen::Matrix2d rho = noisy_qubit(p, q);
    Eigen::Matrix2d z = Eigen::Matrix2d::Identity();
    z(1, 1) = -1.0;
    const Eigen::Matrix2d zrz = z * rho * z;
    return dense_entropy(Eigen::MatrixXd(alpha * kron_power(rho, n) + beta * kron_power(zrz, n)));
}

Eigen::MatrixXd taylor_expm(const Eigen::MatrixXd& a) {
    int squarings = 0;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.25) {
        norm *= 0.5;
        ++squarings;
    }
    const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

double exact_log_binomial(int n, int k) {
    using boost::multiprecision::cpp_int;
    cpp_int c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    // log of a big integer: split off a power of two to stay in double range.
    const std::size_t bits = boost::multiprecision::msb(c) + 1;
    const std::size_t shift = bits > 60 ? bits - 60 : 0;
    const cpp_int top = c >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

SyndromeTable enumerate_pauli_strings(int m1, int m2, const std::array<double, 4>& dist) {
    const int n = m1 * m2;
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= 4;
    SyndromeTable table;
    std::vector<int> letters(n);
    std::vector<int> syndrome;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        double prob = 1.0;
        for (int i = 0; i < n; ++i) {
            letters[i] = static_cast<int>(c & 3);
            c >>= 2;
            prob *= dist[letters[i]];
        }
        if (prob == 0.0) continue;
        auto has_x = [&](int b, int j) { return letters[b * m1 + j] == 1 || letters[b * m1 + j] == 2; };
        auto has_z = [&](int b, int j) { return letters[b * m1 + j] == 2 || letters[b * m1 + j] == 3; };
        syndrome.clear();
        std::vector<int> zpar(m2, 0);
        int lx = 0;
        for (int b = 0; b < m2; ++b) {
            for (int j = 1; j < m1; ++j) syndrome.push_back(has_x(b, 0) ^ has_x(b, j));
            for (int j = 0; j < m1; ++j) zpar[b] ^= has_z(b, j);
            lx ^= has_x(b, 0);
        }
        for (int b = 1; b < m2; ++b) syndrome.push_back(zpar[0] ^ zpar[b]);
        table[syndrome][2 * lx + zpar[0]] += prob;
    }
    return table;
}

double table_conditional_entropy(const SyndromeTable& table) {
    double h = 0.0;
    for (const auto& [s, p] : table) {
        const double ps = p[0] + p[1] + p[2] + p[3];
        for (double x : p) h += eta(x);
        h -= eta(ps);
    }
    return h;
}

namespace {

// Eve's unnormalized state on one qubit pair, conditional on Alice's outcome
// a, split by the classical bit-flip register u: a 2x2 block over v.
Eigen::Matrix2d eve_block(int a, int u, const std::array<double, 4>& puv) {
    // (u, v) = (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.
    const double amp[2][2] = {{std::sqrt(puv[0]), std::sqrt(puv[3])}, {std::sqrt(puv[1]), std::sqrt(puv[2])}};
    Eigen::Vector2d psi(amp[u][0], amp[u][1] * (a ? -1.0 : 1.0));
    return 0.5 * psi * psi.transpose();
}

}  // namespace

double enumerate_mutual_info_xy(int m1, int m2, double p_tilde, double Q) {
    const int n = m1 * m2;
    std::map<std::vector<int>, std::array<double, 2>> table;
    std::vector<int> key;
    for (std::uint64_t e = 0; e < (std::uint64_t{1} << n); ++e) {
        for (std::uint64_t f = 0; f < (std::uint64_t{1} << m2); ++f) {
            double prob = 1.0;
            for (int i = 0; i < n; ++i) prob *= ((e >> i) & 1) ? p_tilde : 1.0 - p_tilde;
            for (int b = 0; b < m2; ++b) prob *= ((f >> b) & 1) ? Q : 1.0 - Q;
            key.clear();
            std::vector<int> outer(m2);
            for (int b = 0; b < m2; ++b) {
                const int first = static_cast<int>((e >> (b * m1)) & 1);
                for (int j = 1; j < m1; ++j) key.push_back(first ^ static_cast<int>((e >> (b * m1 + j)) & 1));
                outer[b] = first ^ static_cast<int>((f >> b) & 1);
            }
            for (int b = 1; b < m2; ++b) key.push_back(outer[0] ^ outer[b]);
            table[key][outer[0]] += prob;
        }
    }
    double h = 0.0;
    for (const auto& [k, p] : table) h += eta(p[0]) + eta(p[1]) - eta(p[0] + p[1]);
    return 1.0 - h;
}

RateOracle purification_rate(int m1, int m2, const std::array<double, 4>& puv, double q, double Q) {
    const int n = m1 * m2;
    const int n_inner = (m1 - 1) * m2;
    const int n_syn = n_inner + m2 - 1;
    const int dim = 1 << n;

    // tau[c][u]: Eve's block after Alice's noisy bit reads c.
    Eigen::Matrix2d tau[2][2];
    for (int c = 0; c < 2; ++c)
        for (int u = 0; u < 2; ++u) tau[c][u] = (1.0 - q) * eve_block(c, u, puv) + q * eve_block(1 - c, u, puv);

    double f_xes = 0.0;
    double f_es = 0.0;
    double px[2] = {0.0, 0.0};
    std::vector<int> bits(n);
    for (int s = 0; s < (1 << n_syn); ++s) {
        for (int u = 0; u < dim; ++u) {
            Eigen::MatrixXd omega[2];
            for (int x = 0; x < 2; ++x) {
                omega[x] = Eigen::MatrixXd::Zero(dim, dim);
                // Noisy block key bits K' are fixed by x and the outer parities.
                std::vector<int> kp(m2);
                kp[0] = x;
                for (int b = 1; b < m2; ++b) kp[b] = x ^ ((s >> (n_inner + b - 1)) & 1);
                for (int k = 0; k < (1 << m2); ++k) {
                    double w = 1.0;
                    for (int b = 0; b < m2; ++b) {
                        const int kb = (k >> b) & 1;
                        w *= kb != kp[b] ? Q : 1.0 - Q;
                        bits[b * m1] = kb;
                        for (int j = 1; j < m1; ++j) bits[b * m1 + j] = kb ^ ((s >> (b * (m1 - 1) + j - 1)) & 1);
                    }
                    if (w == 0.0) continue;
                    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(1, 1);
                    for (int i = 0; i < n; ++i) prod = kron(prod, tau[bits[i]][(u >> (n - 1 - i)) & 1]);
                    omega[x] += w * prod;
                }
                px[x] += omega[x].trace();
            }
            for (int x = 0; x < 2; ++x) f_xes += dense_entropy(omega[x]);
            f_es += dense_entropy(Eigen::MatrixXd(omega[0] + omega[1]));
        }
    }

    RateOracle r;
    r.i_xe = eta(px[0]) + eta(px[1]) + f_es - f_xes;
    const double p_bit = puv[1] + puv[2];
    r.i_xy = enumerate_mutual_info_xy(m1, m2, p_bit * (1.0 - q) + (1.0 - p_bit) * q, Q);
    r.rate = (r.i_xy - r.i_xe) / n;
    return r;
}

qkdrates::ConcSyndromeClass conc_class_of(const std::vector<int>& s, int m1, int m2) {
    const int inner = m1 - 1;
    auto weight = [&](int b) {
        int w = 0;
        for (int j = 0; j < inner; ++j) w += s[b * inner + j];
        return w;
    };
    std::vector<int> freq(2 * m1, 0);
    for (int b = 1; b < m2; ++b) {
        const int alpha = s[m2 * inner + b - 1];
        ++freq[alpha * m1 + weight(b)];
    }
    return qkdrates::make_conc_class(m1, m2, weight(0), freq);
}

}  // namespace oracle
