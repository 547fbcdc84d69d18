#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qkdrates {

using ProbVec = std::vector<double>;
using HermitianMatrix = Eigen::MatrixXcd;
using RealSymMatrix = Eigen::MatrixXd;

// Eigenvalues in descending order.
struct Spectrum {
    std::vector<double> eigenvalues;
};

inline constexpr double kNegativeEntryTol = 1e-12;
inline constexpr double kPsdClampTol = 1e-9;
inline constexpr double kHermiticityTol = 1e-12;

// -x log2 x with the 0 log 0 = 0 convention.
double neg_xlog2x(double x);

double shannon_entropy(std::span<const double> p, double base = 2.0);
double binary_entropy(double x);

Spectrum eigenvalues_hermitian(const HermitianMatrix& a);
Spectrum eigenvalues_symmetric(const RealSymMatrix& a);

// Entropy of a (possibly subnormalized) spectrum after the clamp rule:
// values in [-1e-9, 0) count as zero, anything more negative is an error.
double spectrum_entropy(std::span<const double> eigenvalues);

double von_neumann_entropy(const HermitianMatrix& a);
double von_neumann_entropy(const RealSymMatrix& a);

// Natural log of C(n, k); -inf when k is outside [0, n].
double log_binomial(std::int64_t n, std::int64_t k);
double log_multinomial(std::int64_t n, std::span<const int> parts);

// Exact C(n, k); throws DomainError when the value does not fit.
std::uint64_t binomial(std::int64_t n, std::int64_t k);

// base^exponent with 0^0 = 1.
double ipow(double base, int exponent);

class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    void add(const KahanSum& other) {
        add(other.sum_);
        add(-other.comp_);
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace qkdrates
