#pragma once

// Elementary symmetric functions, the cones Gamma_m, and the m-Hessian of
// constant-coefficient (1,1)-forms.
//
// Normalization: sigma_tilde(A, m) = H_m(lambda(A)) / C(n, m), so that the
// standard Kahler form (identity matrix) has sigma_tilde = 1 for every m.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cxhess/random.hpp"

namespace cxhess::core {

double binomial(int n, int k);

// Real eigenvalue vector lambda = (lambda_1, ..., lambda_n); nonempty, finite.
class EigenVector {
public:
    explicit EigenVector(std::vector<double> values);
    EigenVector(std::initializer_list<double> values) : EigenVector(std::vector<double>(values)) {}

    int size() const noexcept { return static_cast<int>(values_.size()); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }
    double max_abs() const noexcept;

private:
    std::vector<double> values_;
};

// n x n complex Hermitian matrix (a_{j kbar}) of a real (1,1)-form.
class HermitianForm {
public:
    // Throws ArgumentError unless |A - A^*| <= 1e-12 * max(1, |A|) entrywise.
    explicit HermitianForm(const Eigen::MatrixXcd& entries);

    static HermitianForm identity(int n);
    static HermitianForm diagonal(std::span<const double> values);
    static HermitianForm diagonal(std::initializer_list<double> values);
    static HermitianForm zero(int n);

    int dimension() const noexcept { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd& entries() const noexcept { return entries_; }

    // Ascending eigenvalues.
    EigenVector eigenvalues() const;

    HermitianForm operator+(const HermitianForm& other) const;
    HermitianForm operator-(const HermitianForm& other) const;
    HermitianForm operator*(double scale) const;
    friend HermitianForm operator*(double scale, const HermitianForm& form) { return form * scale; }

private:
    struct Trusted {};
    HermitianForm(Eigen::MatrixXcd entries, Trusted) : entries_(std::move(entries)) {}

    Eigen::MatrixXcd entries_;
};

struct ConeReport {
    std::vector<double> h_values; // H_1 .. H_m
    bool member = false;
    double margin = 0.0; // min_j H_j
};

// H_k(lambda), H_0 = 1. Coefficient recurrence of prod_i (t + lambda_i).
double elementary_symmetric(const EigenVector& lambda, int k);

// H_0 .. H_kmax in one pass.
std::vector<double> elementary_symmetric_all(std::span<const double> lambda, int kmax);

// Scale-aware slack 1e-10 * (1 + |lambda|_inf^m).
double cone_tolerance(const EigenVector& lambda, int m);

ConeReport gamma_m_contains(const EigenVector& lambda, int m, double tol);
ConeReport gamma_m_contains(const EigenVector& lambda, int m);

// Normalized means s_p = (H_p / C(n,p))^{1/p}, p = 1..m. Throws DomainError
// when lambda is outside Gamma_m.
std::vector<double> maclaurin_check(const EigenVector& lambda, int m);

double sigma_tilde(const HermitianForm& form, int m);

bool in_gamma_hat(const HermitianForm& form, int m);

// Full polarization M(A_1, ..., A_m) of sigma_tilde(., m), m = forms.size().
double polarized_form(std::span<const HermitianForm> forms);

struct GardingReport {
    double mixed = 0.0;   // M(alpha_1, ..., alpha_m)
    double product = 0.0; // prod_i sigma_tilde(alpha_i)^{1/m}
    double margin = 0.0;  // mixed - product
    bool holds = false;   // margin >= -tol
};

// Throws DomainError when some form is outside Gamma-hat_m.
GardingReport garding_check(std::span<const HermitianForm> forms, double tol);

struct InfReport {
    double inf_estimate = 0.0;  // min over sampled tuples and the designated minimizer
    double exact = 0.0;         // sigma_tilde(A)^{1/m}
    double designated = 0.0;    // value at alpha_i = A / sigma_tilde(A)^{1/m}; NaN if not defined
    double min_sampled = 0.0;   // min over random Sigma_m tuples only
    std::size_t samples = 0;
    bool one_sided = false;     // sigma_tilde(A) == 0: only the lower bound is checked
};

InfReport inf_characterization(const HermitianForm& form, int m, std::size_t samples, std::uint64_t seed);

// L_alpha u = M(dd^c u, alpha_1, ..., alpha_{m-1}) with m = alphas.size() + 1.
// Each alpha_i must lie in Sigma_m (sigma_tilde = 1 within 1e-9).
double l_alpha(const HermitianForm& hessian, std::span<const HermitianForm> alphas);

// Complex Hessian a_{j kbar} = 1/4 [(Q_xx + Q_yy) + i (Q_xy - Q_yx)] of a real
// 2n x 2n Hessian in coordinates (x_1, y_1, ..., x_n, y_n).
HermitianForm complex_hessian_from_real(const Eigen::MatrixXd& real_hessian);

struct DeterminantReport {
    double complex_det_squared = 0.0; // |det A|^2
    double real_det = 0.0;            // det Q
    double constant = 0.0;            // 4^{-n}, calibrated so Q = I gives equality
    double margin = 0.0;              // |det A|^2 - constant * det Q
};

// Throws ArgumentError for a non-symmetric Q, DomainError when Q is not PSD.
DeterminantReport real_complex_det_check(const Eigen::MatrixXd& real_hessian);

// ---------------------------------------------------------------------------
// Seeded samplers.

Eigen::MatrixXcd random_unitary(int n, SplitMix64& rng);

// G G^* + eps I with G complex Gaussian.
HermitianForm random_positive_form(int n, SplitMix64& rng, double eps = 1e-3);

// Positive form rescaled to sigma_tilde = 1.
HermitianForm random_sigma_form(int n, int m, SplitMix64& rng);

// Point of Gamma_m that is generally not in Gamma_n (shifted Gaussian vector).
EigenVector random_gamma_point(int n, int m, SplitMix64& rng);

// U diag(lambda) U^* with lambda from random_gamma_point.
HermitianForm random_gamma_form(int n, int m, SplitMix64& rng);

} // namespace cxhess::core
