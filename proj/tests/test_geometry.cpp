#include <doctest.h>

#include <cmath>

#include "cxhess/errors.hpp"
#include "cxhess/geometry.hpp"
#include "cxhess/random.hpp"

using namespace cxhess;
using geometry::Domain;
using geometry::Point;

TEST_CASE("domain parsing") {
    CHECK(Domain::parse("ball:2", 3).radius() == 2.0);
    CHECK(Domain::parse("ellipsoid:1,4", 2).weights() == std::vector<double>{1, 4});
    CHECK_THROWS_AS(Domain::parse("ellipsoid:1,4", 3), ArgumentError);
    CHECK_THROWS_AS(Domain::parse("cube:1", 2), ArgumentError);
    CHECK_THROWS_AS(Domain::parse("ball:-1", 2), ArgumentError);
}

TEST_CASE("pseudoconvexity constants") {
    for (int m = 1; m <= 3; ++m) CHECK(geometry::pseudoconvexity_constant(Domain::ball(3), m, 50, 1) == 1.0);
    CHECK(geometry::pseudoconvexity_constant(Domain::ellipsoid({1, 4}), 2, 50, 1) == doctest::Approx(2.5));
    CHECK(geometry::pseudoconvexity_constant(Domain::ellipsoid({1, 1, 9}), 1, 50, 1) == doctest::Approx(11.0 / 3));
}

TEST_CASE("boundary samples") {
    const auto ball = Domain::ball(2);
    const auto four = geometry::sample_boundary(ball, 4, 7);
    REQUIRE(four.size() == 4);
    for (const auto& z : four) CHECK(std::abs(z.norm() - 1) <= 1e-12);

    const auto many = geometry::sample_boundary(ball, 100000, 3);
    Point mean = Point::Zero(2);
    for (const auto& z : many) mean += z;
    mean /= static_cast<double>(many.size());
    CHECK(mean.norm() <= 0.02);

    const auto ell = Domain::ellipsoid({1, 4});
    for (const auto& z : geometry::sample_boundary(ell, 2000, 5)) {
        CHECK(std::abs(ell.rho(z)) <= 1e-10);
        CHECK(ell.grad_rho(z).norm() > 0);
    }
    for (const auto& z : geometry::sample_interior(ell, 2000, 5)) CHECK(ell.rho(z) < 0);
}

TEST_CASE("gradient and hessian of rho against finite differences") {
    for (const auto& dom : {Domain::ball(2, 1.5), Domain::ellipsoid({1, 4, 2})}) {
        const int n = dom.dimension();
        const auto pts = geometry::sample_interior(dom, 100, 9);
        for (const auto& z : pts) {
            const Eigen::VectorXd x = geometry::to_real(z);
            const Eigen::VectorXd g = dom.grad_rho(z);
            const double h = 1e-5;
            Eigen::MatrixXd q(2 * n, 2 * n);
            for (int i = 0; i < 2 * n; ++i) {
                Eigen::VectorXd p = x, mnus = x;
                p(i) += h;
                mnus(i) -= h;
                const double fd = (dom.rho(geometry::from_real(p)) - dom.rho(geometry::from_real(mnus))) / (2 * h);
                CHECK(std::abs(fd - g(i)) <= 1e-6 * (1 + std::abs(g(i))));
                for (int k = 0; k < 2 * n; ++k) {
                    auto at = [&](double a, double b) {
                        Eigen::VectorXd y = x;
                        y(i) += a;
                        y(k) += b;
                        return dom.rho(geometry::from_real(y));
                    };
                    const double hh = 1e-4;
                    q(i, k) = (at(hh, hh) - at(hh, -hh) - at(-hh, hh) + at(-hh, -hh)) / (4 * hh * hh);
                }
            }
            const auto want = core::complex_hessian_from_real(0.5 * (q + q.transpose())).entries();
            const auto got = dom.hess_rho(z).entries();
            CHECK((want - got).norm() <= 1e-6 * (1 + got.norm()));
        }
    }
}

TEST_CASE("evaluation grid") {
    const auto ball = Domain::ball(2);
    const auto anchors = geometry::sample_boundary(ball, 8, 1);
    const auto g = geometry::evaluation_grid(ball, 5000, anchors, 2);
    CHECK(g.points.size() == 5000);
    CHECK(g.ray_points + g.cloud_points == 5000);
    for (const auto& z : g.points) CHECK(ball.rho(z) <= 1e-12);
    const auto again = geometry::evaluation_grid(ball, 5000, anchors, 2);
    for (std::size_t i = 0; i < g.points.size(); ++i) CHECK(g.points[i] == again.points[i]);
}
