#include "qkdrates/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>

#include "qkdrates/errors.hpp"

namespace qkdrates {

double neg_xlog2x(double x) {
    if (x <= 0.0) return 0.0;
    return -x * std::log2(x);
}

double shannon_entropy(std::span<const double> p, double base) {
    if (!(base > 1.0)) throw DomainError("shannon_entropy: base must exceed 1");
    double h = 0.0;
    for (double x : p) {
        if (x < -kNegativeEntryTol || std::isnan(x))
            throw DomainError("shannon_entropy: negative probability entry");
        h += neg_xlog2x(x);
    }
    return base == 2.0 ? h : h / std::log2(base);
}

double binary_entropy(double x) {
    if (!(x >= -kNegativeEntryTol && x <= 1.0 + kNegativeEntryTol))
        throw DomainError("binary_entropy: argument outside [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    return neg_xlog2x(x) + neg_xlog2x(1.0 - x);
}

namespace {

template <class Matrix>
void check_hermitian(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("matrix is not square");
    double scale = 1.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a.data()[i]));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i; j < a.cols(); ++j)
            if (std::abs(a(i, j) - std::conj(a(j, i))) > kHermiticityTol * scale)
                throw ShapeError("matrix is not Hermitian");
}

template <class Matrix>
Spectrum solve(const Matrix& a) {
    check_hermitian(a);
    Spectrum s;
    if (a.rows() == 0) return s;
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigensolver did not converge");
    const auto& ev = es.eigenvalues();
    s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
    return s;
}

}  // namespace

Spectrum eigenvalues_hermitian(const HermitianMatrix& a) { return solve(a); }
Spectrum eigenvalues_symmetric(const RealSymMatrix& a) { return solve(a); }

double spectrum_entropy(std::span<const double> eigenvalues) {
    double h = 0.0;
    for (double x : eigenvalues) {
        if (x < -kPsdClampTol || std::isnan(x)) throw NotPsdError("operator is not positive semidefinite");
        h += neg_xlog2x(x);
    }
    return h;
}

double von_neumann_entropy(const HermitianMatrix& a) {
    return spectrum_entropy(eigenvalues_hermitian(a).eigenvalues);
}

double von_neumann_entropy(const RealSymMatrix& a) {
    return spectrum_entropy(eigenvalues_symmetric(a).eigenvalues);
}

double log_binomial(std::int64_t n, std::int64_t k) {
    if (n < 0) throw DomainError("log_binomial: negative n");
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    if (k == 0 || k == n) return 0.0;
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) - std::lgamma(double(n - k) + 1.0);
}

double log_multinomial(std::int64_t n, std::span<const int> parts) {
    double r = std::lgamma(double(n) + 1.0);
    std::int64_t total = 0;
    for (int a : parts) {
        if (a < 0) throw DomainError("log_multinomial: negative part");
        r -= std::lgamma(double(a) + 1.0);
        total += a;
    }
    if (total != n) throw DomainError("log_multinomial: parts do not sum to n");
    return r;
}

std::uint64_t binomial(std::int64_t n, std::int64_t k) {
    if (n < 0) throw DomainError("binomial: negative n");
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
        if (r > std::numeric_limits<std::uint64_t>::max()) throw DomainError("binomial: overflow");
    }
    return static_cast<std::uint64_t>(r);
}

double ipow(double base, int exponent) {
    if (exponent == 0) return 1.0;
    if (exponent < 0) return 1.0 / ipow(base, -exponent);
    double r = 1.0;
    double b = base;
    unsigned e = static_cast<unsigned>(exponent);
    while (e) {
        if (e & 1u) r *= b;
        b *= b;
        e >>= 1u;
    }
    return r;
}

}  // namespace qkdrates
