#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace qkdrates {

// A qubit state rho and Z rho Z, both with Bloch length r, separated by the
// angle theta about the y axis.  Half-integer spins are carried as two_j.
struct BlochPair {
    double p_eff = 0.0;
    double q = 0.0;
    double r = 1.0;
    double cos_theta = 1.0;

    double theta() const;
    double rho1() const { return 0.5 * (1.0 + r); }
    double rho2() const { return 0.5 * (1.0 - r); }
};

BlochPair make_bloch_pair(double p_eff, double q);

// Multiplicity of the spin-j irrep inside n qubits.
boost::multiprecision::cpp_int degeneracy(int n, int two_j);
double log_degeneracy(int n, int two_j);

// Entries rho1^(j-k) rho2^(j+k) (rho1 rho2)^(n/2-j) for k = -j..j.
std::vector<double> diag_irrep(int n, int two_j, double rho1, double rho2);

// exp(-i J_y theta / 2) in the |j,k> basis, k = -j..j.
Eigen::MatrixXd wigner_rotation(int two_j, double theta);

struct IrrepBlock {
    int two_j = 0;
    double multiplicity = 0.0;
    std::vector<double> eigenvalues;
};

struct BlockSpectrum {
    std::vector<IrrepBlock> blocks;
};

// Spectrum of alpha rho^(x)n + beta (Z rho Z)^(x)n block by block.  Meant for
// moderate n; the entropy routines below work with rescaled blocks instead.
BlockSpectrum mix_block_spectrum(int n, double alpha, double beta, const BlochPair& bp);

double mix_entropy_z_pair(int n, double alpha, double beta, const BlochPair& bp);

// Same entropy for several weight pairs sharing n and the Bloch geometry.
std::vector<double> mix_entropy_z_pair_many(int n, std::span<const std::pair<double, double>> weights,
                                            const BlochPair& bp);

}  // namespace qkdrates
