#include "cxhess/hessian_core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "cxhess/errors.hpp"

namespace cxhess::core {

namespace {

void require_order(int m, int n, const char* what) {
    if (m < 1 || m > n) {
        std::ostringstream msg;
        msg << what << ": order m=" << m << " outside [1, " << n << "]";
        throw ArgumentError(msg.str());
    }
}

std::vector<double> eigenvalues_of(const Eigen::MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw DomainError("Hermitian eigensolver did not converge");
    const Eigen::VectorXd& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double sigma_of_matrix(const Eigen::MatrixXcd& a, int m) {
    const int n = static_cast<int>(a.rows());
    const auto lambda = eigenvalues_of(a);
    return elementary_symmetric_all(lambda, m)[static_cast<std::size_t>(m)] / binomial(n, m);
}

} // namespace

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double result = 1.0;
    for (int i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return std::round(result);
}

// ---------------------------------------------------------------------------

EigenVector::EigenVector(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw ArgumentError("EigenVector: empty");
    for (double v : values_)
        if (!std::isfinite(v)) throw ArgumentError("EigenVector: non-finite entry");
}

double EigenVector::max_abs() const noexcept {
    double r = 0.0;
    for (double v : values_) r = std::max(r, std::abs(v));
    return r;
}

HermitianForm::HermitianForm(const Eigen::MatrixXcd& entries) {
    if (entries.rows() == 0 || entries.rows() != entries.cols())
        throw ArgumentError("HermitianForm: matrix must be square and nonempty");
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    const double skew = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
    if (!(skew <= 1e-12 * scale)) throw ArgumentError("HermitianForm: matrix is not Hermitian");
    entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianForm HermitianForm::identity(int n) {
    if (n < 1) throw ArgumentError("HermitianForm::identity: n must be positive");
    return HermitianForm(Eigen::MatrixXcd::Identity(n, n), Trusted{});
}

HermitianForm HermitianForm::zero(int n) {
    if (n < 1) throw ArgumentError("HermitianForm::zero: n must be positive");
    return HermitianForm(Eigen::MatrixXcd::Zero(n, n), Trusted{});
}

HermitianForm HermitianForm::diagonal(std::span<const double> values) {
    if (values.empty()) throw ArgumentError("HermitianForm::diagonal: empty");
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(values.size()),
                                                static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw ArgumentError("HermitianForm::diagonal: non-finite entry");
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
    }
    return HermitianForm(std::move(a), Trusted{});
}

HermitianForm HermitianForm::diagonal(std::initializer_list<double> values) {
    const std::vector<double> v(values);
    return diagonal(std::span<const double>(v));
}

EigenVector HermitianForm::eigenvalues() const { return EigenVector(eigenvalues_of(entries_)); }

HermitianForm HermitianForm::operator+(const HermitianForm& other) const {
    if (other.dimension() != dimension()) throw ArgumentError("HermitianForm: dimension mismatch");
    return HermitianForm(entries_ + other.entries_, Trusted{});
}

HermitianForm HermitianForm::operator-(const HermitianForm& other) const {
    if (other.dimension() != dimension()) throw ArgumentError("HermitianForm: dimension mismatch");
    return HermitianForm(entries_ - other.entries_, Trusted{});
}

HermitianForm HermitianForm::operator*(double scale) const {
    return HermitianForm(entries_ * scale, Trusted{});
}

// ---------------------------------------------------------------------------

std::vector<double> elementary_symmetric_all(std::span<const double> lambda, int kmax) {
    const int n = static_cast<int>(lambda.size());
    if (kmax < 0 || kmax > n) throw ArgumentError("elementary_symmetric: k outside [0, n]");
    std::vector<double> e(static_cast<std::size_t>(kmax) + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        const double li = lambda[static_cast<std::size_t>(i)];
        for (int j = std::min(i + 1, kmax); j >= 1; --j) e[static_cast<std::size_t>(j)] += li * e[static_cast<std::size_t>(j - 1)];
    }
    return e;
}

double elementary_symmetric(const EigenVector& lambda, int k) {
    return elementary_symmetric_all(lambda.values(), k)[static_cast<std::size_t>(k)];
}

double cone_tolerance(const EigenVector& lambda, int m) {
    return 1e-10 * (1.0 + std::pow(lambda.max_abs(), m));
}

ConeReport gamma_m_contains(const EigenVector& lambda, int m, double tol) {
    require_order(m, lambda.size(), "gamma_m_contains");
    const auto e = elementary_symmetric_all(lambda.values(), m);
    ConeReport report;
    report.h_values.assign(e.begin() + 1, e.end());
    report.margin = *std::min_element(report.h_values.begin(), report.h_values.end());
    report.member = report.margin >= -tol;
    return report;
}

ConeReport gamma_m_contains(const EigenVector& lambda, int m) {
    return gamma_m_contains(lambda, m, cone_tolerance(lambda, m));
}

std::vector<double> maclaurin_check(const EigenVector& lambda, int m) {
    const auto cone = gamma_m_contains(lambda, m);
    if (!cone.member) throw DomainError("maclaurin_check: lambda is not in Gamma_m");
    const int n = lambda.size();
    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(m));
    for (int p = 1; p <= m; ++p) {
        const double hp = std::max(0.0, cone.h_values[static_cast<std::size_t>(p - 1)]);
        means.push_back(std::pow(hp / binomial(n, p), 1.0 / p));
    }
    return means;
}

double sigma_tilde(const HermitianForm& form, int m) {
    require_order(m, form.dimension(), "sigma_tilde");
    return sigma_of_matrix(form.entries(), m);
}

bool in_gamma_hat(const HermitianForm& form, int m) { return gamma_m_contains(form.eigenvalues(), m).member; }

double polarized_form(std::span<const HermitianForm> forms) {
    const int m = static_cast<int>(forms.size());
    if (m == 0) throw ArgumentError("polarized_form: no arguments");
    const int n = forms[0].dimension();
    for (const auto& f : forms)
        if (f.dimension() != n) throw ArgumentError("polarized_form: mismatched dimensions");
    require_order(m, n, "polarized_form");
    if (m > 24) throw ArgumentError("polarized_form: order too large for polarization");

    // Signed form of the polarization identity: sum over sign vectors e of
    // (prod e_i) S(sum e_i A_i) / (2^m m!). It equals the subset version for a
    // homogeneous polynomial of degree m but cancels far less (about 3x versus
    // about 300x the result at m = 6). e and -e give the same term, so e_1 = +1.
    // Each sum is formed from scratch.
    Eigen::MatrixXcd partial(n, n);
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << (m - 1)); ++mask) {
        partial = forms[0].entries();
        for (int i = 1; i < m; ++i) {
            if (mask & (1u << (i - 1))) partial -= forms[static_cast<std::size_t>(i)].entries();
            else partial += forms[static_cast<std::size_t>(i)].entries();
        }
        const double term = sigma_of_matrix(partial, m);
        total += (std::popcount(mask) % 2 == 0) ? term : -term;
    }
    double factorial = 1.0;
    for (int k = 2; k <= m; ++k) factorial *= k;
    return total / (factorial * std::ldexp(1.0, m - 1));
}

GardingReport garding_check(std::span<const HermitianForm> forms, double tol) {
    const int m = static_cast<int>(forms.size());
    if (m == 0) throw ArgumentError("garding_check: no arguments");
    double product = 1.0;
    for (const auto& f : forms) {
        if (f.dimension() != forms[0].dimension()) throw ArgumentError("garding_check: mismatched dimensions");
        require_order(m, f.dimension(), "garding_check");
        if (!in_gamma_hat(f, m)) throw DomainError("garding_check: form outside Gamma-hat_m");
        product *= std::pow(std::max(0.0, sigma_tilde(f, m)), 1.0 / m);
    }
    GardingReport report;
    report.mixed = polarized_form(forms);
    report.product = product;
    report.margin = report.mixed - report.product;
    report.holds = report.margin >= -tol;
    return report;
}

InfReport inf_characterization(const HermitianForm& form, int m, std::size_t samples, std::uint64_t seed) {
    const int n = form.dimension();
    require_order(m, n, "inf_characterization");
    if (!in_gamma_hat(form, m)) throw DomainError("inf_characterization: form outside Gamma-hat_m");

    InfReport report;
    const double s = std::max(0.0, sigma_tilde(form, m));
    report.exact = std::pow(s, 1.0 / m);
    report.samples = samples;
    report.one_sided = !(s > 1e-14 * (1.0 + std::pow(form.eigenvalues().max_abs(), m)));
    report.designated = std::numeric_limits<double>::quiet_NaN();
    report.min_sampled = std::numeric_limits<double>::infinity();

    std::vector<HermitianForm> args(static_cast<std::size_t>(m), form);
    if (!report.one_sided) {
        const HermitianForm minimizer = form * (1.0 / report.exact);
        for (int i = 1; i < m; ++i) args[static_cast<std::size_t>(i)] = minimizer;
        report.designated = polarized_form(args);
    }
    for (std::size_t k = 0; k < samples; ++k) {
        SplitMix64 rng = substream(seed, k, 0x1a1);
        for (int i = 1; i < m; ++i) args[static_cast<std::size_t>(i)] = random_sigma_form(n, m, rng);
        report.min_sampled = std::min(report.min_sampled, polarized_form(args));
    }
    report.inf_estimate = report.min_sampled;
    if (!report.one_sided) report.inf_estimate = std::min(report.inf_estimate, report.designated);
    return report;
}

double l_alpha(const HermitianForm& hessian, std::span<const HermitianForm> alphas) {
    const int m = static_cast<int>(alphas.size()) + 1;
    require_order(m, hessian.dimension(), "l_alpha");
    std::vector<HermitianForm> args;
    args.reserve(static_cast<std::size_t>(m));
    args.push_back(hessian);
    for (const auto& a : alphas) {
        if (a.dimension() != hessian.dimension()) throw ArgumentError("l_alpha: mismatched dimensions");
        if (std::abs(sigma_tilde(a, m) - 1.0) > 1e-9 || !in_gamma_hat(a, m))
            throw DomainError("l_alpha: alpha is not in Sigma_m");
        args.push_back(a);
    }
    return polarized_form(args);
}

HermitianForm complex_hessian_from_real(const Eigen::MatrixXd& q) {
    if (q.rows() != q.cols() || q.rows() == 0 || q.rows() % 2 != 0)
        throw ArgumentError("complex_hessian_from_real: expected a 2n x 2n matrix");
    const Eigen::Index n = q.rows() / 2;
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double re = q(2 * j, 2 * k) + q(2 * j + 1, 2 * k + 1);
            const double im = q(2 * j, 2 * k + 1) - q(2 * j + 1, 2 * k);
            a(j, k) = 0.25 * std::complex<double>(re, im);
        }
    }
    return HermitianForm(a);
}

DeterminantReport real_complex_det_check(const Eigen::MatrixXd& q) {
    if (q.rows() != q.cols() || q.rows() == 0 || q.rows() % 2 != 0)
        throw ArgumentError("real_complex_det_check: expected a 2n x 2n matrix");
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ArgumentError("real_complex_det_check: Q is not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-12 * scale)
        throw DomainError("real_complex_det_check: Q is not positive semidefinite");

    const int n = static_cast<int>(q.rows() / 2);
    const HermitianForm a = complex_hessian_from_real(q);
    DeterminantReport report;
    report.complex_det_squared = std::norm(a.entries().determinant());
    report.real_det = solver.eigenvalues().prod();
    report.constant = std::pow(4.0, -n);
    report.margin = report.complex_det_squared - report.constant * report.real_det;
    return report;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXcd random_unitary(int n, SplitMix64& rng) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = {rng.normal(), rng.normal()};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    // Fix column phases with the diagonal of R so the distribution is Haar.
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const double mag = std::abs(r(j, j));
        if (mag > 0) q.col(j) *= r(j, j) / mag;
    }
    return q;
}

HermitianForm random_positive_form(int n, SplitMix64& rng, double eps) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = {rng.normal(), rng.normal()};
    Eigen::MatrixXcd a = g * g.adjoint() / static_cast<double>(n);
    a.diagonal().array() += eps;
    return HermitianForm(0.5 * (a + a.adjoint()));
}

HermitianForm random_sigma_form(int n, int m, SplitMix64& rng) {
    const HermitianForm a = random_positive_form(n, rng);
    return a * (1.0 / std::pow(sigma_tilde(a, m), 1.0 / m));
}

EigenVector random_gamma_point(int n, int m, SplitMix64& rng) {
    require_order(m, n, "random_gamma_point");
    std::vector<double> lambda(static_cast<std::size_t>(n));
    for (auto& v : lambda) v = rng.normal();
    auto shifted = [&](double t) {
        std::vector<double> out(lambda);
        for (auto& v : out) v += t;
        return out;
    };
    auto inside = [&](double t) {
        const auto e = elementary_symmetric_all(shifted(t), m);
        return std::all_of(e.begin() + 1, e.end(), [](double h) { return h > 0.0; });
    };
    // lambda + t*1 is in Gamma_m for all t beyond the threshold; bisect it.
    double lo = 0.0, hi = 1.0;
    for (double v : lambda) hi = std::max(hi, 1.0 + std::abs(v));
    if (inside(lo)) {
        hi = lo;
    } else {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (inside(mid) ? hi : lo) = mid;
        }
    }
    return EigenVector(shifted(hi + 0.25 * rng.uniform()));
}

HermitianForm random_gamma_form(int n, int m, SplitMix64& rng) {
    const EigenVector lambda = random_gamma_point(n, m, rng);
    const Eigen::MatrixXcd u = random_unitary(n, rng);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = lambda[i];
    const Eigen::MatrixXcd a = u * d.asDiagonal() * u.adjoint();
    return HermitianForm(0.5 * (a + a.adjoint()));
}

} // namespace cxhess::core
