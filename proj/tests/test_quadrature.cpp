#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cxhess/errors.hpp"
#include "cxhess/quadrature.hpp"

using namespace cxhess;

TEST_CASE("polynomials are exact") {
    // G7K15 integrates degree 22 exactly.
    const auto r = quad::kronrod15([](double x) { return std::pow(x, 20); }, 0, 1);
    CHECK(r.value == doctest::Approx(1.0 / 21).epsilon(1e-14));
}

TEST_CASE("smooth and singular integrands") {
    CHECK(quad::integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi).value ==
          doctest::Approx(2).epsilon(1e-13));
    const auto s = quad::integrate([](double x) { return 1 / std::sqrt(x); }, 0, 1);
    CHECK(std::abs(s.value - 2) <= 1e-9);
    const auto l = quad::integrate([](double x) { return std::log(x); }, 0, 1);
    CHECK(std::abs(l.value + 1) <= 1e-9);
}

TEST_CASE("budget exhaustion throws") {
    quad::Options opt;
    opt.max_intervals = 3;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 0;
    CHECK_THROWS_AS(quad::integrate([](double x) { return std::sin(1 / (x + 1e-3)); }, 0, 1, opt), QuadratureError);
}
