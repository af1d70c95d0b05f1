#include "cxhess/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "cxhess/errors.hpp"
#include "cxhess/random.hpp"

namespace cxhess::geometry {

namespace {

double parse_number(std::string_view text, std::string_view context) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ArgumentError("domain '" + std::string(context) + "': bad number '" + std::string(text) + "'");
    return v;
}

Eigen::VectorXd gaussian_direction(int dim, SplitMix64& rng) {
    Eigen::VectorXd u(dim);
    double norm = 0.0;
    do {
        for (int i = 0; i < dim; ++i) u(i) = rng.normal();
        norm = u.norm();
    } while (norm < 1e-12);
    return u / norm;
}

} // namespace

Eigen::VectorXd to_real(const Point& z) {
    Eigen::VectorXd x(2 * z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        x(2 * j) = z(j).real();
        x(2 * j + 1) = z(j).imag();
    }
    return x;
}

Point from_real(const Eigen::VectorXd& x) {
    if (x.size() % 2 != 0) throw ArgumentError("from_real: odd real dimension");
    Point z(x.size() / 2);
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = {x(2 * j), x(2 * j + 1)};
    return z;
}

Domain Domain::ball(int n, double radius) {
    if (n < 1) throw ArgumentError("Domain::ball: n must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ArgumentError("Domain::ball: radius must be positive");
    return Domain(DomainKind::ball, n, radius, std::vector<double>(static_cast<std::size_t>(n), 1.0 / (radius * radius)));
}

Domain Domain::ellipsoid(std::vector<double> weights) {
    if (weights.empty()) throw ArgumentError("Domain::ellipsoid: no weights");
    for (double a : weights)
        if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("Domain::ellipsoid: weights must be positive");
    const int n = static_cast<int>(weights.size());
    return Domain(DomainKind::ellipsoid, n, 0.0, std::move(weights));
}

Domain Domain::parse(std::string_view text, int n) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ArgumentError("domain '" + std::string(text) + "': expected kind:params");
    const auto kind = text.substr(0, colon);
    const auto params = text.substr(colon + 1);
    if (kind == "ball") return ball(n, parse_number(params, text));
    if (kind == "ellipsoid") {
        std::vector<double> weights;
        std::size_t start = 0;
        while (start <= params.size()) {
            const auto comma = params.find(',', start);
            const auto piece = params.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            weights.push_back(parse_number(piece, text));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (static_cast<int>(weights.size()) != n)
            throw ArgumentError("domain '" + std::string(text) + "': expected " + std::to_string(n) + " weights");
        return ellipsoid(std::move(weights));
    }
    throw ArgumentError("domain '" + std::string(text) + "': unknown kind");
}

std::string Domain::describe() const {
    std::ostringstream out;
    out.precision(17);
    if (kind_ == DomainKind::ball) {
        out << "ball:" << radius_;
    } else {
        out << "ellipsoid:";
        for (std::size_t i = 0; i < weights_.size(); ++i) out << (i ? "," : "") << weights_[i];
    }
    return out.str();
}

double Domain::rho(const Point& z) const {
    if (z.size() != n_) throw ArgumentError("Domain::rho: dimension mismatch");
    if (kind_ == DomainKind::ball) return z.squaredNorm() - radius_ * radius_;
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += weights_[static_cast<std::size_t>(j)] * std::norm(z(j));
    return s - 1.0;
}

Eigen::VectorXd Domain::grad_rho(const Point& z) const {
    if (z.size() != n_) throw ArgumentError("Domain::grad_rho: dimension mismatch");
    Eigen::VectorXd g(2 * n_);
    for (int j = 0; j < n_; ++j) {
        const double a = kind_ == DomainKind::ball ? 1.0 : weights_[static_cast<std::size_t>(j)];
        g(2 * j) = 2.0 * a * z(j).real();
        g(2 * j + 1) = 2.0 * a * z(j).imag();
    }
    return g;
}

core::HermitianForm Domain::hess_rho(const Point& z) const {
    if (z.size() != n_) throw ArgumentError("Domain::hess_rho: dimension mismatch");
    if (kind_ == DomainKind::ball) return core::HermitianForm::identity(n_);
    return core::HermitianForm::diagonal(std::span<const double>(weights_));
}

double Domain::diameter() const noexcept {
    if (kind_ == DomainKind::ball) return 2.0 * radius_;
    return 2.0 / std::sqrt(*std::min_element(weights_.begin(), weights_.end()));
}

Point Domain::barycenter() const { return Point::Zero(n_); }

double Domain::lipschitz_rho() const noexcept {
    if (kind_ == DomainKind::ball) return 2.0 * radius_;
    return 2.0 * std::sqrt(*std::max_element(weights_.begin(), weights_.end()));
}

std::vector<Point> Domain::axis_points() const {
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(4 * n_));
    for (int k = 0; k < n_; ++k) {
        const double s = kind_ == DomainKind::ball ? radius_ : 1.0 / std::sqrt(weights_[static_cast<std::size_t>(k)]);
        for (const std::complex<double> unit : {std::complex<double>(1, 0), std::complex<double>(-1, 0),
                                                std::complex<double>(0, 1), std::complex<double>(0, -1)}) {
            Point p = Point::Zero(n_);
            p(k) = s * unit;
            out.push_back(std::move(p));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<Point> sample_boundary(const Domain& domain, std::size_t count, std::uint64_t seed) {
    if (count < 1) throw ArgumentError("sample_boundary: count must be positive");
    const int n = domain.dimension();
    std::vector<Point> out;
    out.reserve(count);
    const auto& a = domain.weights();
    const double a_max = *std::max_element(a.begin(), a.end());
    for (std::size_t i = 0; i < count; ++i) {
        SplitMix64 rng = substream(seed, i, 0xb0);
        if (domain.kind() == DomainKind::ball) {
            out.push_back(from_real(gaussian_direction(2 * n, rng) * domain.radius()));
            continue;
        }
        // The map u -> u / sqrt(a) from the sphere has surface Jacobian
        // proportional to |sqrt(a) u|; accept with that weight.
        for (;;) {
            const Eigen::VectorXd u = gaussian_direction(2 * n, rng);
            double weight = 0.0;
            for (int j = 0; j < 2 * n; ++j) weight += a[static_cast<std::size_t>(j / 2)] * u(j) * u(j);
            if (rng.uniform() <= std::sqrt(weight / a_max)) {
                Eigen::VectorXd x(2 * n);
                for (int j = 0; j < 2 * n; ++j) x(j) = u(j) / std::sqrt(a[static_cast<std::size_t>(j / 2)]);
                Point z = from_real(x);
                z /= std::sqrt(domain.rho(z) + 1.0);
                out.push_back(std::move(z));
                break;
            }
        }
    }
    return out;
}

std::vector<Point> sample_interior(const Domain& domain, std::size_t count, std::uint64_t seed) {
    const int n = domain.dimension();
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        SplitMix64 rng = substream(seed, i, 0x1e);
        const Eigen::VectorXd u = gaussian_direction(2 * n, rng);
        const double radial = std::pow(rng.uniform(), 1.0 / (2.0 * n));
        Eigen::VectorXd x = u * radial;
        for (int j = 0; j < 2 * n; ++j) {
            x(j) *= domain.kind() == DomainKind::ball ? domain.radius()
                                                      : 1.0 / std::sqrt(domain.weights()[static_cast<std::size_t>(j / 2)]);
        }
        out.push_back(from_real(x));
    }
    return out;
}

std::vector<Point> sample_collar(const Domain& domain, std::size_t count, double width, std::uint64_t seed) {
    auto boundary = sample_boundary(domain, count, seed ^ 0xc011a5ULL);
    const double d = domain.diameter();
    for (std::size_t i = 0; i < boundary.size(); ++i) {
        SplitMix64 rng = substream(seed, i, 0xc0);
        const double shift = rng.uniform(-width, width);
        const Point c = domain.barycenter();
        const double dist = (boundary[i] - c).norm();
        boundary[i] = c + (boundary[i] - c) * ((dist + shift) / std::max(dist, 1e-12 * d));
    }
    return boundary;
}

double pseudoconvexity_constant(const Domain& domain, int m, std::size_t samples, std::uint64_t seed) {
    const int n = domain.dimension();
    if (m < 1 || m > n) throw ArgumentError("pseudoconvexity_constant: m outside [1, n]");
    auto probes = sample_interior(domain, samples, seed);
    const auto collar = sample_collar(domain, samples, 0.01 * domain.diameter(), seed);
    probes.insert(probes.end(), collar.begin(), collar.end());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : probes) {
        const auto h = domain.hess_rho(z);
        for (int k = 1; k <= m; ++k) best = std::min(best, core::sigma_tilde(h, k));
    }
    if (!(best > 0.0)) throw DomainError("pseudoconvexity_constant: domain is not strongly m-pseudoconvex");
    return best;
}

EvaluationGrid evaluation_grid(const Domain& domain, std::size_t total, const std::vector<Point>& anchors,
                               std::uint64_t seed) {
    const double d = domain.diameter();
    const Point c = domain.barycenter();
    constexpr int fine_steps = 200;
    constexpr int coarse_steps = 30;
    const double fine = 5e-5 * d;

    EvaluationGrid grid;
    const std::size_t per_ray = fine_steps + 1 + coarse_steps;
    const std::size_t max_rays = total / per_ray;
    const std::size_t rays = std::min(anchors.size(), max_rays);
    grid.points.reserve(total);
    for (std::size_t r = 0; r < rays; ++r) {
        const Point& xi = anchors[r];
        const double reach = (c - xi).norm();
        const Point dir = (c - xi) / reach;
        for (int k = 0; k <= fine_steps; ++k) grid.points.push_back(xi + dir * (fine * k));
        const double start = fine * fine_steps;
        for (int k = 1; k <= coarse_steps; ++k) {
            const double depth = start * std::pow(0.95 * reach / start, static_cast<double>(k) / coarse_steps);
            grid.points.push_back(xi + dir * depth);
        }
    }
    grid.rays = rays;
    grid.ray_points = grid.points.size();
    const auto cloud = sample_interior(domain, total - grid.ray_points, seed);
    grid.points.insert(grid.points.end(), cloud.begin(), cloud.end());
    grid.cloud_points = cloud.size();
    return grid;
}

} // namespace cxhess::geometry
