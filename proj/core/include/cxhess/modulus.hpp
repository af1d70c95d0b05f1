#pragma once

// Moduli of continuity as piecewise-linear curves on [0, l]: empirical
// estimation from samples, least concave majorant, the scaling bound
// wbar(eta t) <= (1 + eta) w(t), and log-log Holder regression.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace cxhess::modulus {

struct Knot {
    double t = 0.0;
    double w = 0.0;
    bool operator==(const Knot&) const = default;
};

// Knots 0 = t_0 < t_1 < ... < t_K = l with w_0 = 0 and w nondecreasing;
// linear between knots.
class ModulusCurve {
public:
    explicit ModulusCurve(std::vector<Knot> knots);

    // Samples a closed-form modulus at count + 1 equispaced knots on [0, l].
    static ModulusCurve from_function(const std::function<double(double)>& omega, double length, int count);

    const std::vector<Knot>& knots() const noexcept { return knots_; }
    double length() const noexcept { return knots_.back().t; }

    // Throws ExtrapolationError for t > length().
    double operator()(double t) const;

    bool operator==(const ModulusCurve&) const = default;

private:
    std::vector<Knot> knots_;
};

struct EstimateOptions {
    int bins = 200;
    std::optional<double> t_max;            // default: bounding-box diagonal of the points
    std::size_t exact_pair_limit = 20000;   // above this many points, pairs are subsampled
    std::size_t sampled_pairs = 20'000'000;
    std::uint64_t seed = 42;
};

// Per-bin supremum of |psi(x) - psi(y)| over pairs with |x - y| in
// (t_{k-1}, t_k], followed by a running max; w_0 = 0.
ModulusCurve estimate_modulus(std::span<const Eigen::VectorXd> points, std::span<const double> values,
                              const EstimateOptions& options = {});

// Upper concave envelope of the knot set, evaluated at the input knots.
ModulusCurve concave_majorant(const ModulusCurve& curve);

struct ScalingBound {
    double omega_eta_t = 0.0;    // w(eta t)
    double majorant_eta_t = 0.0; // wbar(eta t)
    double upper = 0.0;          // (1 + eta) w(t)
    double lower_margin = 0.0;   // wbar(eta t) - w(eta t)
    double upper_margin = 0.0;   // (1 + eta) w(t) - wbar(eta t)
};

ScalingBound scaling_bound_check(const ModulusCurve& curve, double eta, double t);
// Same, with the majorant of `curve` already computed.
ScalingBound scaling_bound_check(const ModulusCurve& curve, const ModulusCurve& majorant, double eta, double t);

struct HolderFit {
    double exponent = 0.0;
    double constant = 0.0;
    double r_squared = 0.0;
    std::pair<double, double> fit_window{0.0, 0.0};
    std::size_t knots_used = 0;
};

// Least squares of log w on log t over knots with t in the window and w > 0.
HolderFit holder_fit(const ModulusCurve& curve, std::pair<double, double> window);

// CSV with a `t,w` header and 17 significant digits; JSON {"knots": [[t, w], ...]}.
void write_csv(const ModulusCurve& curve, std::ostream& out);
ModulusCurve read_csv(std::istream& in);
std::string to_json(const ModulusCurve& curve);
ModulusCurve modulus_from_json(std::string_view text);

} // namespace cxhess::modulus
