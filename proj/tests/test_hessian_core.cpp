#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "cxhess/errors.hpp"
#include "cxhess/hessian_core.hpp"
#include "cxhess/random.hpp"

using namespace cxhess;
using core::EigenVector;
using core::HermitianForm;

namespace {

// Subset enumeration, kept deliberately naive.
double subset_h(const std::vector<double>& lambda, int k) {
    const int n = static_cast<int>(lambda.size());
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != k) continue;
        double prod = 1.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) prod *= lambda[static_cast<std::size_t>(i)];
        total += prod;
    }
    return total;
}

// Sum of principal minors of order m divided by C(n,m); independent of eigenvalues.
double minors_sigma(const Eigen::MatrixXcd& a, int m) {
    const int n = static_cast<int>(a.rows());
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != m) continue;
        std::vector<int> idx;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        Eigen::MatrixXcd sub(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) sub(i, j) = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        total += sub.determinant().real();
    }
    return total / core::binomial(n, m);
}

} // namespace

TEST_CASE("elementary symmetric examples") {
    CHECK(core::elementary_symmetric(EigenVector{1, 1, 1}, 2) == doctest::Approx(3));
    CHECK(core::elementary_symmetric(EigenVector{1, 2, 3}, 2) == doctest::Approx(11));
    CHECK(core::elementary_symmetric(EigenVector{5, -1}, 2) == doctest::Approx(-5));
    CHECK(core::elementary_symmetric(EigenVector{5, -1}, 0) == 1.0);
    CHECK_THROWS_AS(core::elementary_symmetric(EigenVector{1, 2}, 3), ArgumentError);
    CHECK_THROWS_AS(core::elementary_symmetric(EigenVector{1, 2}, -1), ArgumentError);
}

TEST_CASE("elementary symmetric matches subset enumeration") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        SplitMix64 rng = substream(1, s);
        const int n = 1 + static_cast<int>(s % 8);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = rng.uniform(-3, 3);
        for (int k = 0; k <= n; ++k) {
            const double want = subset_h(v, k);
            CHECK(std::abs(core::elementary_symmetric(EigenVector(v), k) - want) <= 1e-10 * (1 + std::abs(want)));
        }
    }
}

TEST_CASE("shift identity for H_m") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        SplitMix64 rng = substream(2, s);
        const int n = 2 + static_cast<int>(s % 5);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = rng.uniform(-2, 2);
        const double t = rng.uniform(0, 3);
        std::vector<double> shifted = v;
        for (auto& x : shifted) x += t;
        for (int m = 1; m <= n; ++m) {
            double rhs = 0.0;
            for (int p = 0; p <= m; ++p) rhs += core::binomial(n - p, m - p) * subset_h(v, p) * std::pow(t, m - p);
            const double lhs = core::elementary_symmetric(EigenVector(shifted), m);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1 + std::abs(rhs)));
        }
    }
}

TEST_CASE("cone membership examples") {
    auto r = core::gamma_m_contains(EigenVector{1, 1}, 2);
    CHECK(r.member);
    CHECK(r.margin == doctest::Approx(1));
    CHECK(core::gamma_m_contains(EigenVector{5, -1}, 1).member);
    CHECK(core::gamma_m_contains(EigenVector{5, -1}, 1).h_values[0] == doctest::Approx(4));
    auto r2 = core::gamma_m_contains(EigenVector{5, -1}, 2);
    CHECK_FALSE(r2.member);
    CHECK(r2.h_values[1] == doctest::Approx(-5));
    for (int m = 1; m <= 4; ++m) {
        auto z = core::gamma_m_contains(EigenVector{0, 0, 0, 0}, m);
        CHECK(z.member);
        CHECK(z.margin == 0.0);
    }
}

TEST_CASE("cones are nested") {
    for (std::uint64_t s = 0; s < 500; ++s) {
        SplitMix64 rng = substream(3, s);
        const int n = 2 + static_cast<int>(s % 5);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = rng.uniform(-1, 3);
        const EigenVector lam(v);
        for (int m = 2; m <= n; ++m)
            if (core::gamma_m_contains(lam, m).member) CHECK(core::gamma_m_contains(lam, m - 1).member);
    }
}

TEST_CASE("maclaurin examples") {
    for (double s : core::maclaurin_check(EigenVector{1, 1, 1, 1}, 4)) CHECK(s == doctest::Approx(1));
    auto c = core::maclaurin_check(EigenVector{1, 2, 3}, 3);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == doctest::Approx(2));
    CHECK(c[1] == doctest::Approx(std::sqrt(11.0 / 3)));
    CHECK(c[2] == doctest::Approx(std::cbrt(6.0)));
    CHECK(c[0] >= c[1]);
    CHECK(c[1] >= c[2]);
    auto d = core::maclaurin_check(EigenVector{2, 0, 0}, 2);
    CHECK(d[0] == doctest::Approx(2.0 / 3));
    CHECK(d[1] == doctest::Approx(0).epsilon(1e-12));
    CHECK_THROWS_AS(core::maclaurin_check(EigenVector{5, -1}, 2), DomainError);
}

TEST_CASE("sigma tilde examples and minor oracle") {
    for (int m = 1; m <= 4; ++m) CHECK(core::sigma_tilde(HermitianForm::identity(4), m) == doctest::Approx(1));
    CHECK(core::sigma_tilde(HermitianForm::diagonal({2, 3}), 2) == doctest::Approx(6));
    CHECK(core::sigma_tilde(HermitianForm::diagonal({1, 2, 3}), 2) == doctest::Approx(11.0 / 3));
    for (std::uint64_t s = 0; s < 100; ++s) {
        SplitMix64 rng = substream(4, s);
        const int n = 1 + static_cast<int>(s % 5);
        const auto a = core::random_positive_form(n, rng);
        for (int m = 1; m <= n; ++m) {
            const double want = minors_sigma(a.entries(), m);
            CHECK(std::abs(core::sigma_tilde(a, m) - want) <= 1e-10 * (1 + std::abs(want)));
        }
    }
    Eigen::MatrixXcd bad(2, 2);
    bad << 1, 2, 0, 1;
    CHECK_THROWS_AS(HermitianForm{bad}, ArgumentError);
}

TEST_CASE("polarized form examples") {
    std::vector<HermitianForm> ids(3, HermitianForm::identity(3));
    CHECK(core::polarized_form(ids) == doctest::Approx(1));
    std::vector<HermitianForm> f{HermitianForm::diagonal({2, 3}), HermitianForm::identity(2)};
    CHECK(core::polarized_form(f) == doctest::Approx(2.5));
    std::vector<HermitianForm> mixed{HermitianForm::identity(2), HermitianForm::identity(3)};
    CHECK_THROWS_AS(core::polarized_form(mixed), ArgumentError);
}

TEST_CASE("polarized form is symmetric, multilinear and matches the diagonal") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        SplitMix64 rng = substream(5, s);
        const int n = 2 + static_cast<int>(s % 4);
        const int m = 1 + static_cast<int>((s / 4) % static_cast<std::size_t>(n));
        std::vector<HermitianForm> f;
        for (int i = 0; i < m; ++i) f.push_back(core::random_positive_form(n, rng));
        const double base = core::polarized_form(f);
        auto swapped = f;
        std::swap(swapped.front(), swapped.back());
        CHECK(std::abs(core::polarized_form(swapped) - base) <= 1e-10 * (1 + std::abs(base)));

        const auto b = core::random_positive_form(n, rng);
        const double c = rng.uniform(-2, 2);
        auto lin = f, other = f;
        lin[0] = c * f[0] + b;
        other[0] = b;
        const double want = c * base + core::polarized_form(other);
        CHECK(std::abs(core::polarized_form(lin) - want) <= 1e-10 * (1 + std::abs(want)));

        std::vector<HermitianForm> same(static_cast<std::size_t>(m), f[0]);
        const double direct = core::sigma_tilde(f[0], m);
        CHECK(std::abs(core::polarized_form(same) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("garding examples") {
    std::vector<HermitianForm> ids(2, HermitianForm::identity(2));
    CHECK(std::abs(core::garding_check(ids, 1e-12).margin) <= 1e-14);
    std::vector<HermitianForm> f{HermitianForm::diagonal({2, 3}), HermitianForm::identity(2)};
    auto r = core::garding_check(f, 1e-12);
    CHECK(r.margin == doctest::Approx(2.5 - std::sqrt(6.0)));
    CHECK(r.holds);
    std::vector<HermitianForm> out{HermitianForm::diagonal({5, -1}), HermitianForm::identity(2)};
    CHECK_THROWS_AS(core::garding_check(out, 1e-12), DomainError);
}

TEST_CASE("garding on random positive-definite pairs") {
    for (std::uint64_t s = 0; s < 1000; ++s) {
        SplitMix64 rng = substream(6, s);
        const int n = 1 + static_cast<int>(s % 6);
        std::vector<HermitianForm> f{core::random_positive_form(n, rng), core::random_positive_form(n, rng)};
        if (n < 2) f.pop_back();
        CHECK(core::garding_check(f, 1e-10).holds);
    }
}

TEST_CASE("inf characterization examples") {
    auto id = core::inf_characterization(HermitianForm::identity(2), 2, 200, 1);
    CHECK(id.exact == doctest::Approx(1));
    CHECK(id.designated == doctest::Approx(1));
    auto d = core::inf_characterization(HermitianForm::diagonal({2, 3}), 2, 200, 1);
    CHECK(d.exact == doctest::Approx(std::sqrt(6.0)));
    CHECK(std::abs(d.designated - std::sqrt(6.0)) <= 1e-12);
    auto e = core::inf_characterization(HermitianForm::diagonal({1, 2, 3}), 2, 500, 9);
    CHECK(e.inf_estimate >= std::sqrt(11.0 / 3) - 1e-10);
    auto z = core::inf_characterization(HermitianForm::diagonal({1, 0}), 2, 100, 1);
    CHECK(z.one_sided);
    CHECK(z.exact == 0.0);
}

TEST_CASE("l_alpha examples") {
    std::vector<HermitianForm> beta{HermitianForm::identity(2)};
    CHECK(core::l_alpha(HermitianForm::identity(2), beta) == doctest::Approx(1));
    CHECK(core::l_alpha(HermitianForm::zero(2), beta) == doctest::Approx(0).epsilon(1e-14));
    std::vector<HermitianForm> alpha{HermitianForm::diagonal({2, 0.5})};
    CHECK(core::l_alpha(HermitianForm::diagonal({2, 3}), alpha) == doctest::Approx(3.5));
    std::vector<HermitianForm> unnormalized{HermitianForm::diagonal({2, 2})};
    CHECK_THROWS_AS(core::l_alpha(HermitianForm::identity(2), unnormalized), DomainError);
}

TEST_CASE("real to complex determinant") {
    auto id = core::real_complex_det_check(Eigen::MatrixXd::Identity(4, 4));
    CHECK(std::abs(id.margin) <= 1e-14);
    Eigen::MatrixXd q(2, 2);
    q << 1, 0, 0, 4;
    auto d = core::real_complex_det_check(q);
    CHECK(d.complex_det_squared == doctest::Approx(25.0 / 16));
    CHECK(d.margin == doctest::Approx(9.0 / 16));
    // Hessian of u = x^2 + y^2 = |z|^2 is 2I; the complex Hessian is I.
    const auto a = core::complex_hessian_from_real(2.0 * Eigen::MatrixXd::Identity(2, 2));
    CHECK(std::abs(a.entries()(0, 0) - std::complex<double>(1, 0)) <= 1e-15);
    Eigen::MatrixXd asym(2, 2);
    asym << 1, 1, 0, 1;
    CHECK_THROWS_AS(core::real_complex_det_check(asym), ArgumentError);
    for (std::uint64_t s = 0; s < 500; ++s) {
        SplitMix64 rng = substream(7, s);
        const int n = 1 + static_cast<int>(s % 3);
        Eigen::MatrixXd g(2 * n, 2 * n);
        for (int i = 0; i < 2 * n; ++i)
            for (int k = 0; k < 2 * n; ++k) g(i, k) = rng.normal();
        const Eigen::MatrixXd psd = g * g.transpose();
        CHECK(core::real_complex_det_check(psd).margin >= -1e-10 * (1 + psd.determinant()));
    }
}

TEST_CASE("samplers land where they claim") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        SplitMix64 rng = substream(8, s);
        const int n = 2 + static_cast<int>(s % 4);
        const int m = 1 + static_cast<int>(s % static_cast<std::size_t>(n));
        CHECK(core::gamma_m_contains(core::random_gamma_point(n, m, rng), m).member);
        CHECK(core::in_gamma_hat(core::random_gamma_form(n, m, rng), m));
        CHECK(core::sigma_tilde(core::random_sigma_form(n, m, rng), m) == doctest::Approx(1).epsilon(1e-9));
        const auto u = core::random_unitary(n, rng);
        CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).norm() <= 1e-12);
    }
}
