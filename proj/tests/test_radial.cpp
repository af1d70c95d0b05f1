#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cxhess/errors.hpp"
#include "cxhess/hessian_core.hpp"
#include "cxhess/radial.hpp"
#include "cxhess/random.hpp"

using namespace cxhess;
using radial::Convention;
using radial::Density;
using radial::RadialProblem;

namespace {

RadialProblem problem(int n, int m, Density d, Convention c = Convention::form) {
    RadialProblem p;
    p.n = n;
    p.m = m;
    p.density = std::move(d);
    p.convention = c;
    return p;
}

// S~_m of the complex Hessian of u(z) = U(|z|) at a point on the x_1 axis,
// from a real finite-difference Hessian of the solved profile.
double sigma_at(const RadialProblem& pb, double r0) {
    const int n = pb.n;
    auto u = [&](const Eigen::VectorXd& x) { return radial::radial_value(pb, x.norm(), 1e-13); };
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * n);
    x(0) = r0;
    const double h = 1e-3 * r0;
    Eigen::MatrixXd q(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i)
        for (int k = 0; k < 2 * n; ++k) {
            auto at = [&](double a, double b) {
                Eigen::VectorXd y = x;
                y(i) += a;
                y(k) += b;
                return u(y);
            };
            q(i, k) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
        }
    return core::sigma_tilde(core::complex_hessian_from_real(0.5 * (q + q.transpose())), pb.m);
}

} // namespace

TEST_CASE("density parsing") {
    CHECK(Density::parse("const:2").c0() == 2.0);
    CHECK(Density::parse("power:1.5").alpha() == 1.5);
    CHECK(Density::parse("log:0.8").gamma() == 0.8);
    CHECK_THROWS_AS(Density::parse("power"), ArgumentError);
    CHECK_THROWS_AS(Density::parse("wave:1"), ArgumentError);
    CHECK_THROWS_AS(Density::parse("const:-1"), ArgumentError);
    CHECK_THROWS_AS(radial::parse_convention("other"), ArgumentError);
}

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(problem(2, 3, Density::constant(1)).validate(), ArgumentError);
    CHECK_THROWS_AS(problem(2, 2, Density::power(4)).validate(), DomainError);
    CHECK_THROWS_AS(problem(2, 2, Density::log_example(0.6)).validate(), DomainError);
    auto p = problem(2, 1, Density::constant(1));
    p.p = 1.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("constant density closed forms") {
    const auto paper = radial::radial_solve(problem(2, 1, Density::constant(1), Convention::paper), 100);
    for (std::size_t i = 0; i < paper.r.size(); ++i)
        CHECK(std::abs(paper.U[i] - (paper.r[i] * paper.r[i] - 1) / 2) <= 1e-10);
    CHECK(paper.r.front() == 0.0);
    CHECK(paper.U.front() == doctest::Approx(-0.5).epsilon(1e-12));

    for (auto [n, m] : {std::pair{2, 1}, {2, 2}, {3, 2}, {4, 3}}) {
        const double c0 = 2.5;
        const auto s = radial::radial_solve(problem(n, m, Density::constant(c0)), 200);
        for (std::size_t i = 0; i < s.r.size(); ++i)
            CHECK(std::abs(s.U[i] - std::pow(c0, 1.0 / m) * (s.r[i] * s.r[i] - 1)) <= 1e-9);
    }
}

TEST_CASE("power density matches the closed form") {
    for (auto [n, m] : {std::pair{2, 1}, {2, 2}, {3, 2}, {3, 3}})
        for (double alpha : {0.5, 1.0, double(m), 1.9 * m}) {
            const auto pb = problem(n, m, Density::power(alpha), Convention::paper);
            const auto s = radial::radial_solve(pb, 1000);
            for (std::size_t i = 0; i < s.r.size(); ++i) {
                if (s.r[i] < 0.01 || s.r[i] == 1.0) continue;
                const double want = radial::power_closed_form(n, m, alpha, s.B_used, s.r[i]);
                CHECK(std::abs(s.U[i] - want) <= 1e-8 * std::abs(want));
            }
            // the closed form with B from its own formula
            const double c = s.B_used * std::pow(1.0 / (2 * n - alpha), 1.0 / m) * m / (2 * m - alpha);
            CHECK(radial::power_closed_form(n, m, alpha, s.B_used, 0.5) ==
                  doctest::Approx(c * (std::pow(0.5, 2 - alpha / m) - 1)).epsilon(1e-13));
        }
}

TEST_CASE("solution shape and grid doubling") {
    for (const auto& d : {Density::constant(1), Density::power(1.5), Density::log_example(1.5)}) {
        const auto pb = problem(2, 2, d);
        const double tol = 1e-10;
        const auto a = radial::radial_solve(pb, 400, tol);
        const auto b = radial::radial_solve(pb, 800, tol);
        CHECK(a.U.back() == 0.0);
        for (std::size_t i = 1; i < a.U.size(); ++i) CHECK(a.U[i] >= a.U[i - 1]);
        for (double u : a.U) CHECK(u <= 0.0);
        // r = 0 is absent when U(0) is infinite
        const std::size_t skip_a = a.r.front() == 0.0 ? 0 : 1, skip_b = b.r.front() == 0.0 ? 0 : 1;
        for (std::size_t i = 0; i < a.r.size(); ++i) {
            const std::size_t j = 2 * (i + skip_a) - skip_b;
            REQUIRE(b.r[j] == a.r[i]);
            CHECK(std::abs(a.U[i] - b.U[j]) <= 10 * tol);
        }
    }
}

TEST_CASE("finite-difference oracle for the operator") {
    // form convention: S~_m(dd^c u) = f
    for (const auto& [n, m, d] : {std::tuple{2, 1, Density::constant(3)}, {2, 2, Density::power(2)},
                                  {3, 2, Density::power(1)}, {3, 3, Density::log_example(2)}}) {
        const auto pb = problem(n, m, d);
        for (double r0 : {0.3, 0.6, 0.85}) {
            const double f = pb.density(r0, m);
            const double got = sigma_at(pb, r0);
            INFO(n, " ", m, " ", r0, " got ", got, " want ", f);
            CHECK(std::abs(got - f) <= 1e-4 * (1 + f));
        }
    }
    // paper convention: off by C(n,m) in S~_m
    const auto pp = problem(3, 2, Density::constant(1), Convention::paper);
    CHECK(sigma_at(pp, 0.5) == doctest::Approx(1.0 / 3).epsilon(1e-5));
}

TEST_CASE("hessian residual") {
    const auto c = problem(3, 2, Density::constant(2));
    CHECK(radial::radial_hessian_residual(radial::radial_solve(c, 2000), c).max_residual <= 1e-6);
    const auto p = problem(2, 2, Density::power(2));
    CHECK(radial::radial_hessian_residual(radial::radial_solve(p, 2000), p).max_residual <= 1e-4);
    const auto pp = problem(3, 2, Density::constant(1), Convention::paper);
    const auto rep = radial::radial_hessian_residual(radial::radial_solve(pp, 2000), pp);
    CHECK(rep.mean_ratio == doctest::Approx(1.0 / 3).epsilon(1e-6));
    CHECK(rep.max_residual == doctest::Approx(std::abs(1.0 / 3 - 1) / 2).epsilon(1e-6));
    CHECK_THROWS_AS(radial::radial_hessian_residual(radial::radial_solve(c, 50), c), ArgumentError);
}

TEST_CASE("convention calibration") {
    CHECK(radial::calibrate_convention(2, 1) == doctest::Approx(8).epsilon(1e-8));
    CHECK(radial::calibrate_convention(3, 3) == doctest::Approx(2 * std::cbrt(6.0)).epsilon(1e-8));
    for (std::uint64_t s = 0; s < 10; ++s) {
        SplitMix64 rng = substream(21, s);
        const int n = 1 + static_cast<int>(rng() % 6);
        const int m = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
        const double ratio = radial::b_constant(n, m, Convention::paper) / radial::b_constant(n, m, Convention::form);
        CHECK(ratio == doctest::Approx(std::pow(core::binomial(n, m), -1.0 / m)).epsilon(1e-13));
    }
}

TEST_CASE("holder exponents") {
    const auto sqrt_case = problem(2, 2, Density::power(3));
    const auto s = radial::radial_solve(sqrt_case, 20000);
    const auto h = radial::holder_exponent_check(sqrt_case, s);
    CHECK(h.expected == doctest::Approx(0.5));
    CHECK(std::abs(h.fit.exponent - 0.5) <= 0.03);
    const auto lip = problem(3, 2, Density::power(1));
    const auto l = radial::holder_exponent_check(lip, radial::radial_solve(lip, 20000));
    CHECK(l.expected == 1.0);
    CHECK(l.pass);
    // alpha close to 8/3 for n = m = 2 approaches 2/3
    const auto near = problem(2, 2, Density::power(8.0 / 3 - 1e-3));
    const auto nr = radial::holder_exponent_check(near, radial::radial_solve(near, 20000));
    CHECK(std::abs(nr.fit.exponent - 2.0 / 3) <= 0.03);
}

TEST_CASE("log example") {
    const auto bounded = radial::log_example_check(4.0, 2, 2);
    CHECK(bounded.bounded);
    CHECK(bounded.bound_holds);
    const auto crit = radial::log_example_check(2.0, 2, 2);
    CHECK_FALSE(crit.bounded);
    const auto unb = radial::log_example_check(0.6, 2, 1);
    CHECK_FALSE(unb.bounded);
    CHECK(unb.abs_u_increasing);
    CHECK(unb.bound_holds);
    REQUIRE(unb.abs_u.size() == 8);
    CHECK(unb.abs_u.back() > 2 * unb.abs_u.front());
    CHECK_THROWS_AS(radial::log_example_check(0.6, 2, 2), DomainError);
}

TEST_CASE("gamma exponent") {
    const auto g = radial::gamma_exponent(2, 1, 3, 1);
    CHECK(g.q == doctest::Approx(1.5));
    CHECK(g.gamma_r == doctest::Approx(1.0 / 7).epsilon(1e-14));
    for (int n = 1; n <= 4; ++n) CHECK(std::abs(radial::gamma_exponent(n, n, 1e6, 1).gamma_r - 1.0 / (1 + n)) <= 1e-4);
    CHECK_THROWS_AS(radial::gamma_exponent(2, 1, 2, 1), DomainError);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) {
            const double r = 1 + 0.5 * i, p = 3.5 + 0.5 * j;
            const double base = radial::gamma_exponent(3, 2, p, r).gamma_r;
            CHECK(radial::gamma_exponent(3, 2, p, r + 0.5).gamma_r > base);
            CHECK(radial::gamma_exponent(3, 2, p + 0.5, r).gamma_r > base);
        }
}

TEST_CASE("Lp modulus inequality has a finite constant") {
    // f = r^{-alpha} with alpha < 2n/p lies in L^p
    const auto pb = problem(2, 2, Density::power(1.0));
    const auto s = radial::radial_solve(pb, 400);
    const auto fit = radial::lp_modulus_fit(pb, s, 1.5);
    CHECK(fit.exponent == doctest::Approx(2.0 / 3));
    CHECK(std::isfinite(fit.constant));
    CHECK(fit.constant > 0);
}

TEST_CASE("csv output") {
    const auto s = radial::radial_solve(problem(2, 1, Density::constant(1), Convention::paper), 4);
    std::ostringstream out;
    radial::write_csv(s, out);
    CHECK(out.str().rfind("r,U\n0,-0.5\n", 0) == 0);
}
