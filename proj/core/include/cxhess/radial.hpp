#pragma once

// Radial solutions of S_m(dd^c U) = f on the unit ball with U = 0 on the
// sphere, via
//   U(r) = -B int_r^1 t^{1-2n/m} ( int_0^t s^{2n-1} f(s) ds )^{1/m} dt.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cxhess/modulus.hpp"

namespace cxhess::radial {

enum class Convention { paper, form };

std::string to_string(Convention c);
Convention parse_convention(std::string_view text);

class Density {
public:
    enum class Kind { constant, power, log_example, table };

    static Density constant(double c0);
    // f(s) = s^{-alpha}
    static Density power(double alpha);
    // f(s) = s^{-2m} (1 - log s)^{-gamma}; m is fixed by the problem.
    static Density log_example(double gamma);
    // Log-log interpolation between samples, extended by the end power laws.
    static Density table(std::vector<double> radii, std::vector<double> values);
    // "const:c", "power:a", "log:g", or "table:path" (CSV with s,f columns).
    static Density parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    double c0() const noexcept { return c0_; }
    double alpha() const noexcept { return alpha_; }
    double gamma() const noexcept { return gamma_; }
    const std::vector<double>& radii() const noexcept { return radii_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::string describe() const;

    // f(s); m is needed only for the log example.
    double operator()(double s, int m) const;

private:
    Density() = default;
    Kind kind_ = Kind::constant;
    double c0_ = 0.0;
    double alpha_ = 0.0;
    double gamma_ = 0.0;
    std::vector<double> radii_, values_;
};

struct RadialProblem {
    int n = 2;
    int m = 1;
    Density density = Density::constant(1.0);
    std::optional<double> p;   // integrability exponent, metadata only
    Convention convention = Convention::form;

    // Throws ArgumentError / DomainError for invalid dimensions or densities.
    void validate() const;
};

struct RadialSolution {
    std::vector<double> r;
    std::vector<double> U;
    double B_used = 0.0;
    double quadrature_tol = 0.0;
    double achieved_error = 0.0;
};

// B for the given convention.
double b_constant(int n, int m, Convention convention);

// int_0^t s^{2n-1} f(s) ds. Throws DomainError when it diverges.
double inner_integral(const RadialProblem& problem, double t);

// Grid r_i = i/N, i = 0..N; r = 0 is dropped when U(0) is infinite.
RadialSolution radial_solve(const RadialProblem& problem, int grid, double tol = 1e-10);

// U at a single radius in (0, 1].
double radial_value(const RadialProblem& problem, double r, double tol = 1e-10);

// c (r^{2 - alpha/m} - 1) with c = B (2n - alpha)^{-1/m} m / (2m - alpha).
double power_closed_form(int n, int m, double alpha, double B, double r);

struct ResidualReport {
    double max_residual = 0.0;   // max |S_m - f| / (1 + f)
    double at_r = 0.0;
    double mean_ratio = 0.0;     // mean S_m / f over the checked points
    std::size_t points = 0;
};

// Finite-difference eigenvalues of dd^c U on grid points with r >= r_min.
ResidualReport radial_hessian_residual(const RadialSolution& solution, const RadialProblem& problem,
                                       double r_min = 0.05);

// Fits U = a (r^2 - 1) for const(1) with B = 1 and returns 1/a.
double calibrate_convention(int n, int m);

struct HolderCheck {
    modulus::HolderFit fit;
    double expected = 0.0;
    bool pass = false;
};

// 1-D modulus of U on the grid, fitted on [max(1e-4, h), 1e-2];
// expected exponent min(1, 2 - alpha/m), tolerance 0.03.
HolderCheck holder_exponent_check(const RadialProblem& problem, const RadialSolution& solution);

// 1-D modulus w(k h) = max_i |U_{i+k} - U_i| for a uniform grid.
modulus::ModulusCurve radial_modulus(const RadialSolution& solution);

struct LogExampleReport {
    int n = 0;
    int m = 0;
    double gamma = 0.0;
    bool bounded = false;              // verdict
    double tail_exponent = 0.0;        // decay rate of the s-integrand
    std::vector<double> abs_u;         // |U(10^{-k})|, k = 1..8
    bool abs_u_increasing = false;
    double fitted_c = 0.0;
    bool bound_holds = false;          // U <= C h on r in [1e-6, 0.5]
    std::size_t bound_points = 0;
};

// Density s^{-2m}(1 - log s)^{-gamma}. Needs gamma > m/n; for n = m the inner
// integral also needs gamma > 1 and a DomainError is thrown otherwise.
LogExampleReport log_example_check(double gamma, int n, int m, double tol = 1e-10);

struct GammaExponent {
    double gamma_r = 0.0;
    double q = 0.0;
    double gamma_1 = 0.0;
    double alpha_bound_1 = 0.0;   // gamma_1
    double alpha_bound_2 = 0.0;   // min(1/2, 2 gamma_1)
};

// r / (r + m q + p q (n - m) / (p - n/m)), q = p/(p-1).
GammaExponent gamma_exponent(int n, int m, double p, double r);

struct LpModulusFit {
    double p = 0.0;
    double exponent = 0.0;   // 2 - 2n/(m p)
    double lp_norm = 0.0;    // ||f||_{L^p(ball)}
    double constant = 0.0;   // smallest C over grid pairs
    std::size_t pairs = 0;
};

// |U(r1) - U(r)| <= C ||f||_p^{1/m} (r1^b - r^b) over all grid pairs; needs
// n/m < p < 2n/m and f in L^p.
LpModulusFit lp_modulus_fit(const RadialProblem& problem, const RadialSolution& solution, double p);

void write_csv(const RadialSolution& solution, std::ostream& out);
std::string to_json(const RadialSolution& solution, const RadialProblem& problem);

} // namespace cxhess::radial
