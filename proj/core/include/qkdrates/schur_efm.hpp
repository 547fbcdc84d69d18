#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qkdrates {

using Partition = std::vector<int>;
using Tableau = std::vector<std::vector<int>>;

// Occupation numbers of the q single-site levels in a computational basis
// state of n sites.
struct Configuration {
    std::vector<int> counts;

    int n() const;
    int q() const { return static_cast<int>(counts.size()); }
};

// Basis states of one configuration in lexicographic order of their strings.
std::vector<std::vector<int>> configuration_states(const Configuration& config);
std::uint64_t configuration_dimension(const Configuration& config);
std::vector<Configuration> all_configurations(int n, int q);

// Eigenvalues of the 2-cycle and 3-cycle class sums on the irrep nu.
long lambda2(const Partition& nu);
long lambda3(const Partition& nu);
std::uint64_t symmetric_group_dimension(const Partition& nu);
std::uint64_t general_linear_dimension(const Partition& nu, int q);
std::vector<Partition> partitions(int n, int max_rows);

inline constexpr int kMaxSites = 15;

// Class sum of 2- or 3-cycles of the subgroup S_k acting on the first k sites.
Eigen::MatrixXd class_operator(int n, int cycle_len, int subgroup_size, const Configuration& config);

// Class sum of the intrinsic group: cycles among the sites that currently
// hold one of the first chain_index occupied levels.
Eigen::MatrixXd intrinsic_class_operator(int n, int cycle_len, int chain_index, const Configuration& config);

struct SchurVector {
    Partition nu;
    Tableau weyl;                        // rows of level labels
    std::vector<std::vector<int>> gelfand;  // q rows, top row is nu padded to q
    Tableau tableau;                     // Young tableau rows, numbers 1..n
    std::vector<long> tableau_eigs;      // lambda2 of C_2 on S_n, S_{n-1}, ..., S_2
    std::vector<int> counts;
    std::vector<std::pair<std::uint64_t, double>> coeffs;  // (state index, amplitude)
};

struct SchurBasis {
    int n = 0;
    int q = 0;
    std::vector<SchurVector> vectors;
};

inline constexpr double kDefaultSchurBudget = 4096.0;
inline constexpr double kEigenSnapTol = 1e-6;

// Index of a basis state: the first site is the most significant base-q digit.
std::uint64_t state_index(const std::vector<int>& letters, int q);
std::vector<int> state_letters(std::uint64_t index, int n, int q);

SchurBasis schur_basis(int n, int q, double budget = kDefaultSchurBudget);

// Process-wide cache of built bases.
const SchurBasis& cached_schur_basis(int n, int q, double budget = kDefaultSchurBudget);

struct IrrepBlockMatrix {
    Partition nu;
    Eigen::MatrixXcd block;
    std::uint64_t multiplicity = 0;  // dimension of the symmetric-group irrep
};

// Blocks of rho^(x)n in the Schur basis.  tableau_choice selects which Young
// tableau (in basis order) represents each irrep.  Irreps with fewer copies
// use their last tableau; a choice no irrep reaches is an error.
std::vector<IrrepBlockMatrix> block_project(const SchurBasis& basis, const Eigen::MatrixXcd& rho,
                                            int tableau_choice = 0);

// Entropy of sum_i w_i rho_i^(x)n through the Schur blocks.
double tensor_power_mixture_entropy(const SchurBasis& basis, const std::vector<double>& weights,
                                    const std::vector<Eigen::MatrixXcd>& states);

}  // namespace qkdrates
