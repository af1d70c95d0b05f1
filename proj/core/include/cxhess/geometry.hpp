#pragma once

// Model strongly m-pseudoconvex domains in C^n: balls |z|^2 < R^2 and
// axis-aligned ellipsoids sum_j a_j |z_j|^2 < 1.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cxhess/hessian_core.hpp"

namespace cxhess::geometry {

using Point = Eigen::VectorXcd;

// Real coordinates (x_1, y_1, ..., x_n, y_n).
Eigen::VectorXd to_real(const Point& z);
Point from_real(const Eigen::VectorXd& x);

enum class DomainKind { ball, ellipsoid };

class Domain {
public:
    static Domain ball(int n, double radius = 1.0);
    static Domain ellipsoid(std::vector<double> weights);
    // "ball:R" or "ellipsoid:a1,...,an"; an ellipsoid must list exactly n weights.
    static Domain parse(std::string_view text, int n);

    DomainKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return n_; }
    double radius() const noexcept { return radius_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::string describe() const;

    // ball: |z|^2 - R^2; ellipsoid: sum a_j |z_j|^2 - 1.
    double rho(const Point& z) const;
    // Real gradient in (x_1, y_1, ..., x_n, y_n).
    Eigen::VectorXd grad_rho(const Point& z) const;
    // Complex Hessian, normalized so |z|^2 has the identity.
    core::HermitianForm hess_rho(const Point& z) const;

    double diameter() const noexcept;
    Point barycenter() const;
    // sup of |grad rho| over the closure.
    double lipschitz_rho() const noexcept;
    bool contains(const Point& z) const { return rho(z) < 0.0; }

    // Boundary points +-e_k, +-i e_k scaled onto the boundary (4n points).
    std::vector<Point> axis_points() const;

private:
    Domain(DomainKind kind, int n, double radius, std::vector<double> weights)
        : kind_(kind), n_(n), radius_(radius), weights_(std::move(weights)) {}

    DomainKind kind_;
    int n_;
    double radius_;
    std::vector<double> weights_;
};

// Min over sampled interior and collar points and k = 1..m of
// sigma_tilde(hess rho, k). Throws DomainError when the estimate is <= 0.
double pseudoconvexity_constant(const Domain& domain, int m, std::size_t samples, std::uint64_t seed);

// Surface-uniform boundary samples; point i depends only on (seed, i).
std::vector<Point> sample_boundary(const Domain& domain, std::size_t count, std::uint64_t seed);

// Volume-uniform interior samples.
std::vector<Point> sample_interior(const Domain& domain, std::size_t count, std::uint64_t seed);

// Points within `width` of the boundary on either side.
std::vector<Point> sample_collar(const Domain& domain, std::size_t count, double width, std::uint64_t seed);

struct EvaluationGrid {
    std::vector<Point> points;
    std::size_t ray_points = 0;
    std::size_t cloud_points = 0;
    std::size_t rays = 0;
};

// Rays from boundary anchors toward the barycenter (fine uniform steps of
// 5e-5 d up to depth 0.01 d, then geometric), topped up to `total` points with
// a volume-uniform cloud. Anchors beyond what `total` allows are dropped.
EvaluationGrid evaluation_grid(const Domain& domain, std::size_t total, const std::vector<Point>& anchors,
                               std::uint64_t seed);

} // namespace cxhess::geometry
