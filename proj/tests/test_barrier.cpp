#include <doctest.h>

#include <cmath>

#include "cxhess/barrier.hpp"
#include "cxhess/errors.hpp"
#include "cxhess/hessian_core.hpp"

using namespace cxhess;
using barrier::Domain;
using barrier::Point;

namespace {

const Domain ball = Domain::ball(2);

Point point(double a, double b) {
    Point z(2);
    z << std::complex<double>(a, 0), std::complex<double>(b, 0);
    return z;
}

std::vector<Point> grid(std::size_t count, const std::vector<Point>& anchors) {
    return geometry::evaluation_grid(ball, count, anchors, 5).points;
}

} // namespace

TEST_CASE("constant data gives constant envelopes") {
    const auto data = barrier::named_boundary_data("const:0.3", ball);
    const auto src = barrier::parse_source("zero");
    const auto v = barrier::build_subsolution(data, src, ball, 2, 100, 42);
    const auto vt = barrier::build_supersolution(data, src, ball, 2, 100, 42);
    for (const auto& z : grid(2000, {})) {
        CHECK(v(z) == 0.3);
        CHECK(vt(z) == 0.3);
    }
    const auto zero = barrier::build_subsolution(barrier::named_boundary_data("const:0", ball), src, ball, 2, 50, 1);
    for (const auto& z : grid(500, {})) CHECK(zero(z) == 0.0);
}

TEST_CASE("re z1: boundary behaviour and sandwich") {
    const auto data = barrier::named_boundary_data("re_z1", ball);
    const auto src = barrier::parse_source("zero");
    const auto v = barrier::build_subsolution(data, src, ball, 2, 300, 42);
    const auto vt = barrier::build_supersolution(data, src, ball, 2, 300, 42);
    for (const auto& xi : v.xi()) {
        CHECK(std::abs(v(xi) - data.phi(xi)) <= 1e-9);
        CHECK(std::abs(vt(xi) - data.phi(xi)) <= 1e-9);
    }
    for (const auto& z : geometry::sample_boundary(ball, 10000, 99)) {
        CHECK(v(z) <= data.phi(z) + 1e-12);
        CHECK(vt(z) >= data.phi(z) - 1e-12);
    }
    const auto exact = barrier::exact_solution("re_z1", "zero", ball, 2);
    REQUIRE(exact);
    for (const auto& z : grid(10000, v.xi())) {
        CHECK(v(z) <= (*exact)(z) + 1e-8);
        CHECK((*exact)(z) <= vt(z) + 1e-8);
    }
    // the single barrier at xi = (1, 0) attains Re z1 there
    const auto pb = barrier::build_point_barrier(
        barrier::make_context(ball, 2, data, src, 42), point(1, 0));
    CHECK(pb(point(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("psi example sandwich") {
    const auto data = barrier::named_boundary_data("psi_sqrt", ball);
    const auto src = barrier::parse_source("zero");
    const auto v = barrier::build_subsolution(data, src, ball, 2, 300, 7);
    const auto vt = barrier::build_supersolution(data, src, ball, 2, 300, 7);
    const auto exact = barrier::exact_solution("psi_sqrt", "zero", ball, 2);
    REQUIRE(exact);
    for (const auto& z : grid(5000, v.xi())) {
        CHECK(v(z) <= (*exact)(z) + 1e-8);
        CHECK((*exact)(z) <= vt(z) + 1e-8);
    }
    CHECK_THROWS_AS(barrier::named_boundary_data("psi_sqrt", Domain::ball(2, 2.0)), ArgumentError);
    CHECK_FALSE(barrier::exact_solution("psi_sqrt", "zero", ball, 1));
}

TEST_CASE("positive source stays below the quadratic solution") {
    const auto data = barrier::named_boundary_data("const:0", ball);
    const auto src = barrier::parse_source("const:1");
    const auto v = barrier::build_subsolution(data, src, ball, 2, 200, 3);
    // S~_m(dd^c u) = 1 for u = |z|^2 - 1
    for (const auto& z : grid(3000, v.xi())) {
        CHECK(v(z) <= 1e-12);
        CHECK(v(z) <= z.squaredNorm() - 1 + 1e-8);
    }
}

TEST_CASE("adding xi never lowers the envelope") {
    const auto data = barrier::named_boundary_data("re_z1", ball);
    const auto src = barrier::parse_source("zero");
    barrier::BarrierOptions opt;
    opt.radius = 1.0;   // fixed so both envelopes share the same barriers
    const auto small = barrier::build_subsolution(data, src, ball, 2, 40, 11, opt);
    const auto large = barrier::build_subsolution(data, src, ball, 2, 120, 11, opt);
    for (std::size_t i = 0; i < small.xi().size(); ++i) REQUIRE(small.xi()[i] == large.xi()[i]);
    for (const auto& z : grid(3000, {})) CHECK(large(z) >= small(z));
}

TEST_CASE("barrier parameters") {
    for (const auto& dom : {ball, Domain::ellipsoid({1, 4})}) {
        const auto data = barrier::named_boundary_data("re_z1", dom);
        const auto v = barrier::build_subsolution(data, barrier::parse_source("zero"), dom, 2, 100, 5);
        const auto p = v.params();
        CHECK(0 < p.r1);
        CHECK(p.r1 < p.r);
        CHECK(p.gamma1 >= p.diameter / p.r1);
        for (const auto& b : v.barriers()) {
            CHECK(b.r1() < b.r());
            CHECK(b.gamma1() >= p.diameter / b.r1());
        }
        const auto hb = dom.hess_rho(dom.barycenter()) * p.B - core::HermitianForm::identity(2);
        CHECK(core::in_gamma_hat(hb, 2));
        for (const auto& xi : v.xi()) CHECK(std::abs(v(xi) - data.phi(xi)) <= 1e-9);
        for (const auto& z : geometry::sample_boundary(dom, 2000, 4)) CHECK(v(z) <= data.phi(z) + 1e-12);
    }
    const auto ctx = barrier::make_context(ball, 2, barrier::named_boundary_data("re_z1", ball),
                                           barrier::parse_source("zero"), 1);
    CHECK_THROWS_AS(barrier::build_point_barrier(ctx, point(0.5, 0)), ParameterError);
}

TEST_CASE("modulus bound report") {
    const auto pts = grid(2000, {});
    const std::vector<double> zeros(pts.size(), 0.0);
    const auto data = barrier::named_boundary_data("re_z1", ball);
    const auto rep = barrier::verify_modulus_bound(pts, zeros, data, 0.0, 2, 2.0, 100, 10.0);
    CHECK(rep.eta_fitted == 0.0);
    CHECK(rep.pass);
    CHECK(rep.violations.empty());
}

TEST_CASE("eta is stable under doubling") {
    const auto data = barrier::named_boundary_data("re_z1", ball);
    const auto src = barrier::parse_source("zero");
    auto eta = [&](std::size_t xi, std::size_t count) {
        const auto v = barrier::build_subsolution(data, src, ball, 2, xi, 42);
        auto anchors = v.xi();
        anchors.resize(32);
        const auto g = geometry::evaluation_grid(ball, count, anchors, 42).points;
        return barrier::verify_modulus_bound(g, v.evaluate_all(g), data, 0.0, 2, 2.0, 200, 1e9).eta_fitted;
    };
    const double a = eta(250, 5000), b = eta(500, 10000);
    CHECK(std::isfinite(a));
    CHECK(std::abs(a - b) <= 0.1 * b);
}

TEST_CASE("finite-difference probe of m-subharmonicity") {
    for (const char* name : {"re_z1", "psi_sqrt"}) {
        const auto v = barrier::build_subsolution(barrier::named_boundary_data(name, ball), barrier::parse_source("zero"),
                                                  ball, 2, 200, 42);
        const auto probe = barrier::probe_subharmonic(v, 300, 42);
        CHECK(probe.smooth > 0);
        CHECK(probe.pass);
    }
}

TEST_CASE("estimated boundary modulus dominates the exact one at knots") {
    const auto exact = barrier::named_boundary_data("re_z1", ball);
    const auto est = barrier::estimated_boundary_data("re_z1", exact.phi, ball, 3000, 100, 42);
    CHECK_FALSE(est.omega_supplied);
    // Re z1 on the sphere has modulus t (attained along the real circle)
    for (const auto& k : est.omega_phi.knots())
        if (k.t > 0.05 && k.t < 1.9) CHECK(k.w >= 0.9 * k.t);
}
