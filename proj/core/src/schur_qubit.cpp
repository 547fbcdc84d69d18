#include "qkdrates/schur_qubit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>

#include "qkdrates/core_math.hpp"
#include "qkdrates/errors.hpp"
#include "qkdrates/parallel.hpp"

namespace qkdrates {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Blocks carrying less total weight than this are dropped; their entropy
// contribution is below 1e-27 bits.
constexpr double kBlockMassCutoff = 1e-30;

void check_spin(int n, int two_j) {
    if (n < 0 || two_j < 0 || two_j > n || ((n - two_j) & 1))
        throw DomainError("spin label incompatible with the number of qubits");
}

}  // namespace

double BlochPair::theta() const { return std::acos(std::clamp(cos_theta, -1.0, 1.0)); }

BlochPair make_bloch_pair(double p_eff, double q) {
    if (!(p_eff >= 0.0 && p_eff <= 1.0) || !(q >= 0.0 && q <= 1.0))
        throw DomainError("Bloch pair parameters outside [0,1]");
    BlochPair bp;
    bp.p_eff = p_eff;
    bp.q = q;
    const double s = p_eff * (1.0 - p_eff);
    const double r2 = std::max(0.0, 1.0 - 16.0 * s * q * (1.0 - q));
    bp.r = std::sqrt(r2);
    bp.cos_theta = r2 > 1e-300 ? std::clamp((1.0 - 8.0 * s * (1.0 - 2.0 * q * (1.0 - q))) / r2, -1.0, 1.0) : 1.0;
    return bp;
}

boost::multiprecision::cpp_int degeneracy(int n, int two_j) {
    check_spin(n, two_j);
    using boost::multiprecision::cpp_int;
    const int k = (n - two_j) / 2;
    cpp_int c = 1;
    for (int i = 1; i <= k; ++i) {
        c *= (n - k + i);
        c /= i;
    }
    return c * (two_j + 1) / ((n + two_j) / 2 + 1);
}

double log_degeneracy(int n, int two_j) {
    check_spin(n, two_j);
    return log_binomial(n, (n - two_j) / 2) + std::log(two_j + 1.0) - std::log((n + two_j) / 2 + 1.0);
}

std::vector<double> diag_irrep(int n, int two_j, double rho1, double rho2) {
    check_spin(n, two_j);
    if (rho1 < 0.0 || rho2 < 0.0) throw DomainError("diag_irrep: negative eigenvalue");
    const int pair_power = (n - two_j) / 2;
    const double common = ipow(rho1 * rho2, pair_power);
    std::vector<double> out(two_j + 1);
    for (int i = 0; i <= two_j; ++i) out[i] = ipow(rho1, two_j - i) * ipow(rho2, i) * common;
    return out;
}

Eigen::MatrixXd wigner_rotation(int two_j, double theta) {
    if (two_j < 0) throw DomainError("negative spin");
    const int d = two_j + 1;
    const double j = two_j / 2.0;
    // J_x is real symmetric with eigenvalues -j..j; J_y is J_x rotated by a
    // quarter turn about z, which is a diagonal phase conjugation.
    Eigen::MatrixXd jx = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) {
        const double k = -j + i;
        const double c = 0.5 * std::sqrt(j * (j + 1.0) - k * (k + 1.0));
        jx(i + 1, i) = c;
        jx(i, i + 1) = c;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jx);
    const Eigen::MatrixXd& v = es.eigenvectors();
    Eigen::VectorXcd phases(d);
    for (int i = 0; i < d; ++i) {
        const double m = std::round(es.eigenvalues()(i) * 2.0) / 2.0;
        phases(i) = std::polar(1.0, -0.5 * theta * m);
    }
    const Eigen::MatrixXcd ex = v.cast<std::complex<double>>() * phases.asDiagonal() * v.transpose();
    Eigen::VectorXcd zq(d);
    for (int i = 0; i < d; ++i) zq(i) = std::polar(1.0, -0.5 * M_PI * (-j + i));
    const Eigen::MatrixXcd full = zq.asDiagonal() * ex * zq.conjugate().asDiagonal();
    return full.real();
}

BlockSpectrum mix_block_spectrum(int n, double alpha, double beta, const BlochPair& bp) {
    if (n < 1) throw DomainError("mix_block_spectrum: n must be positive");
    BlockSpectrum out;
    for (int two_j = n % 2; two_j <= n; two_j += 2) {
        const auto lam = diag_irrep(n, two_j, bp.rho1(), bp.rho2());
        const int d = two_j + 1;
        const Eigen::Map<const Eigen::VectorXd> lv(lam.data(), d);
        const Eigen::MatrixXd rot = wigner_rotation(two_j, 2.0 * bp.theta());
        const Eigen::MatrixXd m = alpha * rot * lv.asDiagonal() * rot.transpose() + beta * Eigen::MatrixXd(lv.asDiagonal());
        IrrepBlock b;
        b.two_j = two_j;
        b.multiplicity = std::exp(log_degeneracy(n, two_j));
        b.eigenvalues = eigenvalues_symmetric(0.5 * (m + m.transpose())).eigenvalues;
        out.blocks.push_back(std::move(b));
    }
    return out;
}

std::vector<double> mix_entropy_z_pair_many(int n, std::span<const std::pair<double, double>> weights,
                                            const BlochPair& bp) {
    if (n < 1) throw DomainError("mix_entropy_z_pair: n must be positive");
    for (const auto& [a, b] : weights)
        if (a < 0.0 || b < 0.0) throw DomainError("mix_entropy_z_pair: negative weight");
    const double rho1 = bp.rho1();
    const double rho2 = bp.rho2();
    const double log_rho1 = std::log(rho1);
    const double log_rho2 = rho2 > 0.0 ? std::log(rho2) : -std::numeric_limits<double>::infinity();
    const double ratio = rho2 / rho1;
    const double theta = bp.theta();
    const std::size_t nw = weights.size();
    const int nblocks = n / 2 + 1;

    // partial[block * nw + w]
    std::vector<double> partial(static_cast<std::size_t>(nblocks) * nw, 0.0);
    parallel_for(nblocks, [&](std::size_t bi) {
        const int two_j = n % 2 + 2 * static_cast<int>(bi);
        const int d = two_j + 1;
        const int up = (n + two_j) / 2;
        const int down = (n - two_j) / 2;
        if (down > 0 && rho2 <= 0.0) return;
        // Block eigenvalues are exp(log_scale) times those of the rescaled
        // block, whose diagonal form is ratio^i, i = 0..2j.
        const double log_scale = up * log_rho1 + (down > 0 ? down * log_rho2 : 0.0);
        const double log_weight = log_degeneracy(n, two_j) + log_scale;
        Eigen::VectorXd lam(d);
        double trace = 0.0;
        for (int i = 0; i < d; ++i) {
            lam(i) = ipow(ratio, i);
            trace += lam(i);
        }
        std::vector<char> needed(nw, 0);
        bool any = false;
        for (std::size_t w = 0; w < nw; ++w) {
            const double mass = (weights[w].first + weights[w].second) * trace;
            if (mass > 0.0 && log_weight + std::log(mass) > std::log(kBlockMassCutoff)) {
                needed[w] = 1;
                any = true;
            }
        }
        if (!any) return;
        Eigen::MatrixXd rotated;
        const bool trivial_rotation = (theta == 0.0);
        if (!trivial_rotation) {
            const Eigen::MatrixXd rot = wigner_rotation(two_j, 2.0 * theta);
            rotated = rot * lam.asDiagonal() * rot.transpose();
            rotated = 0.5 * (rotated + rotated.transpose());
        }
        const double weight = std::exp(log_weight);
        for (std::size_t w = 0; w < nw; ++w) {
            if (!needed[w]) continue;
            const auto [alpha, beta] = weights[w];
            std::vector<double> mu;
            if (trivial_rotation) {
                mu.resize(d);
                for (int i = 0; i < d; ++i) mu[i] = (alpha + beta) * lam(i);
            } else {
                const Eigen::MatrixXd m = alpha * rotated + beta * Eigen::MatrixXd(lam.asDiagonal());
                mu = eigenvalues_symmetric(m).eigenvalues;
            }
            const double h = spectrum_entropy(mu);
            const double mass = (alpha + beta) * trace;
            partial[bi * nw + w] = weight * (h - log_scale / kLn2 * mass);
        }
    });

    std::vector<double> out(nw, 0.0);
    std::vector<double> column(nblocks);
    for (std::size_t w = 0; w < nw; ++w) {
        for (int b = 0; b < nblocks; ++b) column[b] = partial[b * nw + w];
        out[w] = pairwise_sum(column);
    }
    return out;
}

double mix_entropy_z_pair(int n, double alpha, double beta, const BlochPair& bp) {
    const std::pair<double, double> w{alpha, beta};
    return mix_entropy_z_pair_many(n, std::span(&w, 1), bp)[0];
}

}  // namespace qkdrates
