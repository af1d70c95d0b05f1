#pragma once

// Point barriers, the sub/supersolution envelopes built from them, and
// numerical checks of the resulting modulus-of-continuity bound.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cxhess/geometry.hpp"
#include "cxhess/modulus.hpp"

namespace cxhess::barrier {

using geometry::Domain;
using geometry::Point;
using Evaluator = std::function<double(const Point&)>;

struct BoundaryData {
    std::string name;
    Evaluator phi;
    modulus::ModulusCurve omega_phi{{{0.0, 0.0}, {1.0, 0.0}}};
    double sup_norm = 0.0;
    bool omega_supplied = false;   // closed-form modulus rather than an estimate

    // Same data with phi replaced by -phi.
    BoundaryData negated() const;
};

// "re_z1", "psi_sqrt" (unit ball only) or "const:c", each with its exact
// modulus sampled on [0, d].
BoundaryData named_boundary_data(const std::string& spec, const Domain& domain);

// Modulus estimated from boundary samples. Each bin's supremum is moved to the
// left end of the bin, which keeps the curve above the true modulus at knots
// whenever the sampled pairs are dense enough.
BoundaryData estimated_boundary_data(std::string name, Evaluator phi, const Domain& domain, std::size_t samples,
                                     int bins, std::uint64_t seed);

struct Source {
    std::string name = "zero";
    Evaluator f = [](const Point&) { return 0.0; };
    double sup = 0.0;
};

// "zero" or "const:c" with c >= 0.
Source parse_source(const std::string& spec);

// Exact solution for a few (data, source, domain) combinations:
// const:c with f = 0; re_z1 with f = 0; psi_sqrt with f = 0 and m >= 2;
// const:c with f = const:c0 on a ball (c + c0^{1/m}(|z|^2 - R^2)).
std::optional<Evaluator> exact_solution(const std::string& data, const std::string& source, const Domain& domain,
                                        int m);

struct BarrierOptions {
    std::size_t probe_points = 4000;   // cloud used to locate r for each xi
    std::optional<double> radius;      // fixes r instead of searching for it
    double gamma_safety = 1.05;
};

struct BarrierParams {
    double A = 0.0;        // pseudoconvexity constant
    double B = 0.0;        // g = B rho - |z - xi|^2
    double r = 0.0;        // min over xi
    double r1 = 0.0;       // min over xi
    double gamma1 = 0.0;   // max over xi
    double gamma2 = 0.0;   // inf of the shifted data
    double K1 = 0.0;       // sup f^{1/m}
    Point z0;
    double diameter = 0.0;
    double lip_rho = 0.0;
};

// Shared state for all point barriers of one construction.
struct BarrierContext {
    Domain domain;
    int m = 1;
    BoundaryData data;
    Source source;
    BarrierParams params{};
    modulus::ModulusCurve omega_shifted{{{0.0, 0.0}, {1.0, 0.0}}};   // modulus of phi - K1|z - z0|^2
    modulus::ModulusCurve majorant{{{0.0, 0.0}, {1.0, 0.0}}};        // its concave majorant
    std::vector<Point> probes{};
    BarrierOptions options{};

    double shifted(const Point& z) const;   // phi(z) - K1 |z - z0|^2
};

std::shared_ptr<const BarrierContext> make_context(const Domain& domain, int m, BoundaryData data, Source source,
                                                   std::uint64_t seed, const BarrierOptions& options = {});

struct BranchValue {
    double value = 0.0;
    int branch = 0;   // 0: the constant gamma2, 1: the barrier branch
};

class PointBarrier {
public:
    PointBarrier(std::shared_ptr<const BarrierContext> context, const Point& xi);

    double operator()(const Point& z) const { return evaluate(z).value; }
    // rho_z = rho(z), passed in so an envelope computes it once per point.
    BranchValue evaluate(const Point& z) const;
    BranchValue evaluate(const Point& z, double rho_z) const;

    const Point& xi() const noexcept { return xi_; }
    double r() const noexcept { return r_; }
    double r1() const noexcept { return r1_; }
    double gamma1() const noexcept { return gamma1_; }

private:
    std::shared_ptr<const BarrierContext> ctx_;
    Point xi_;
    double shifted_xi_ = 0.0;
    double r_ = 0.0, r1_ = 0.0, gamma1_ = 0.0;
};

// Throws ParameterError when xi is off the boundary or a fixed radius lets |g|
// exceed d^2.
PointBarrier build_point_barrier(std::shared_ptr<const BarrierContext> context, const Point& xi);

struct EnvelopeValue {
    double value = 0.0;
    std::size_t winner = 0;
    int branch = 0;
};

// v = max over the xi of v_xi; with negate = true this is the supersolution
// -max(...) built from -phi.
class Envelope {
public:
    Envelope(std::shared_ptr<const BarrierContext> context, std::vector<Point> xi, bool negate);

    double operator()(const Point& z) const { return evaluate(z).value; }
    EnvelopeValue evaluate(const Point& z) const;
    std::vector<double> evaluate_all(const std::vector<Point>& points) const;

    const BarrierContext& context() const noexcept { return *ctx_; }
    // Context parameters with r, r1 (min over xi) and gamma1 (max over xi).
    BarrierParams params() const;
    const std::vector<PointBarrier>& barriers() const noexcept { return barriers_; }
    const std::vector<Point>& xi() const noexcept { return xi_; }
    bool negated() const noexcept { return negate_; }

private:
    std::shared_ptr<const BarrierContext> ctx_;
    std::vector<Point> xi_;
    std::vector<PointBarrier> barriers_;
    bool negate_;
};

// The 4n axis points followed by xi_count seeded boundary samples; a prefix of
// a longer list for the same seed.
std::vector<Point> boundary_points(const Domain& domain, std::size_t xi_count, std::uint64_t seed);

Envelope build_subsolution(const BoundaryData& data, const Source& source, const Domain& domain, int m,
                           std::size_t xi_count, std::uint64_t seed, const BarrierOptions& options = {});
Envelope build_supersolution(const BoundaryData& data, const Source& source, const Domain& domain, int m,
                             std::size_t xi_count, std::uint64_t seed, const BarrierOptions& options = {});

struct SubharmonicProbe {
    std::size_t probed = 0;
    std::size_t smooth = 0;          // points whose stencil stays on one branch
    double min_cone_margin = 0.0;    // min over smooth points of min_j H_j(lambda / scale)
    double min_l_alpha_gap = 0.0;    // min of L_alpha v - f^{1/m} over sampled alpha
    bool pass = false;
};

// Finite-difference complex Hessian at `count` random interior points.
SubharmonicProbe probe_subharmonic(const Envelope& v, std::size_t count, std::uint64_t seed, double step = 1e-4,
                                   double tol = 1e-6, int alpha_samples = 8);

struct BarrierReport {
    double eta_fitted = 0.0;
    double lambda_bound = 0.0;
    double ceiling = 0.0;
    bool pass = false;
    std::vector<double> violations;
    modulus::ModulusCurve omega_v{{{0.0, 0.0}, {1.0, 0.0}}};
};

// Default ceiling for eta: (gamma1 (1 + sqrt(2d + B Lip rho)) + 2 sqrt d)(1 + 2d).
double default_ceiling(const BarrierParams& params);

// omega_v from values on grid points (real coordinates), compared knot by knot
// with (1 + f_sup^{1/m}) max(omega_phi(sqrt t), sqrt t). t ranges over [0, d].
BarrierReport verify_modulus_bound(const std::vector<Point>& points, const std::vector<double>& values,
                                   const BoundaryData& data, double f_sup, int m, double diameter, int bins,
                                   double ceiling);

// omega on [0, 0.01 d] with bins of width 5e-5 d, fitted on [1e-4, 1e-2] (unit-ball scale).
modulus::HolderFit local_holder_fit(const std::vector<Point>& points, const std::vector<double>& values,
                                    double diameter);

std::string params_json(const BarrierParams& params);

} // namespace cxhess::barrier
