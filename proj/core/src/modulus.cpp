#include "cxhess/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cxhess/errors.hpp"
#include "cxhess/parallel.hpp"
#include "cxhess/random.hpp"

namespace cxhess::modulus {

namespace {

double chord(const Knot& a, const Knot& b, double t) {
    return a.w + (b.w - a.w) * ((t - a.t) / (b.t - a.t));
}

} // namespace

ModulusCurve::ModulusCurve(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw ArgumentError("ModulusCurve: need at least two knots");
    if (knots_.front().t != 0.0 || knots_.front().w != 0.0)
        throw ArgumentError("ModulusCurve: first knot must be (0, 0)");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        const auto& k = knots_[i];
        if (!std::isfinite(k.t) || !std::isfinite(k.w) || k.w < 0.0)
            throw ArgumentError("ModulusCurve: knots must be finite with w >= 0");
        if (i > 0 && !(k.t > knots_[i - 1].t)) throw ArgumentError("ModulusCurve: t must be strictly increasing");
        if (i > 0 && k.w < knots_[i - 1].w) throw ArgumentError("ModulusCurve: w must be nondecreasing");
    }
}

ModulusCurve ModulusCurve::from_function(const std::function<double(double)>& omega, double length, int count) {
    if (!(length > 0.0) || count < 1) throw ArgumentError("ModulusCurve::from_function: bad grid");
    std::vector<Knot> knots(static_cast<std::size_t>(count) + 1);
    double running = 0.0;
    for (int i = 0; i <= count; ++i) {
        const double t = (i == count) ? length : length * i / count;
        running = (i == 0) ? 0.0 : std::max(running, omega(t));
        knots[static_cast<std::size_t>(i)] = {t, running};
    }
    return ModulusCurve(std::move(knots));
}

double ModulusCurve::operator()(double t) const {
    if (!(t >= 0.0)) throw ArgumentError("ModulusCurve: negative argument");
    const double l = length();
    if (t > l) {
        if (t > l * (1.0 + 1e-12)) throw ExtrapolationError("ModulusCurve: argument beyond last knot");
        return knots_.back().w;
    }
    const auto it = std::lower_bound(knots_.begin(), knots_.end(), t,
                                     [](const Knot& k, double v) { return k.t < v; });
    if (it->t == t) return it->w;
    return chord(*(it - 1), *it, t);
}

// ---------------------------------------------------------------------------

ModulusCurve estimate_modulus(std::span<const Eigen::VectorXd> points, std::span<const double> values,
                              const EstimateOptions& options) {
    const std::size_t count = points.size();
    if (count != values.size()) throw ArgumentError("estimate_modulus: points and values differ in length");
    if (count < 2) throw ArgumentError("estimate_modulus: need at least two points");
    if (options.bins < 1) throw ArgumentError("estimate_modulus: bins must be positive");
    const Eigen::Index dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim || dim == 0) throw ArgumentError("estimate_modulus: inconsistent point dimension");

    double t_max = 0.0;
    if (options.t_max) {
        t_max = *options.t_max;
    } else {
        Eigen::VectorXd lo = points[0], hi = points[0];
        for (const auto& p : points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        t_max = (hi - lo).norm();
    }
    if (!(t_max > 0.0)) throw ArgumentError("estimate_modulus: t_max must be positive");

    const int bins = options.bins;
    const double width = t_max / bins;
    auto bin_of = [&](double dist) {
        const int b = static_cast<int>(std::ceil(dist / width));
        return std::clamp(b, 1, bins);
    };

    const unsigned workers = std::max(1u, max_threads());
    std::vector<std::vector<double>> partial(workers, std::vector<double>(static_cast<std::size_t>(bins) + 1, 0.0));

    if (count <= options.exact_pair_limit) {
        // Sweep in order of the first coordinate; pairs farther apart than
        // t_max along it cannot contribute.
        std::vector<std::size_t> order(count);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return points[a](0) < points[b](0); });
        parallel_for(
            workers,
            [&](std::size_t w) {
                auto& local = partial[w];
                // Interleave rows so workers get similar amounts of work.
                for (std::size_t ii = w; ii < count; ii += workers) {
                    const auto& pi = points[order[ii]];
                    const double vi = values[order[ii]];
                    for (std::size_t jj = ii + 1; jj < count; ++jj) {
                        const auto& pj = points[order[jj]];
                        if (pj(0) - pi(0) > t_max) break;
                        const double dist = (pj - pi).norm();
                        if (dist > t_max) continue;
                        auto& slot = local[static_cast<std::size_t>(bin_of(dist))];
                        slot = std::max(slot, std::abs(values[order[jj]] - vi));
                    }
                }
            },
            1);
    } else {
        const std::size_t pairs = options.sampled_pairs;
        const std::size_t blocks = 256;
        std::vector<std::vector<double>> block_bins(blocks, std::vector<double>(static_cast<std::size_t>(bins) + 1, 0.0));
        parallel_for(
            blocks,
            [&](std::size_t b) {
                SplitMix64 rng = substream(options.seed, b, 0x3d);
                const std::size_t lo = pairs * b / blocks;
                const std::size_t hi = pairs * (b + 1) / blocks;
                auto& local = block_bins[b];
                for (std::size_t k = lo; k < hi; ++k) {
                    const std::size_t i = rng() % count;
                    std::size_t j = rng() % (count - 1);
                    if (j >= i) ++j;
                    const double dist = (points[i] - points[j]).norm();
                    if (dist > t_max) continue;
                    auto& slot = local[static_cast<std::size_t>(bin_of(dist))];
                    slot = std::max(slot, std::abs(values[i] - values[j]));
                }
            },
            1);
        for (const auto& local : block_bins)
            for (std::size_t k = 0; k < local.size(); ++k) partial[0][k] = std::max(partial[0][k], local[k]);
    }

    std::vector<Knot> knots(static_cast<std::size_t>(bins) + 1);
    double running = 0.0;
    for (int k = 0; k <= bins; ++k) {
        double sup = 0.0;
        for (const auto& local : partial) sup = std::max(sup, local[static_cast<std::size_t>(k)]);
        running = (k == 0) ? 0.0 : std::max(running, sup);
        knots[static_cast<std::size_t>(k)] = {k == bins ? t_max : width * k, running};
    }
    return ModulusCurve(std::move(knots));
}

ModulusCurve concave_majorant(const ModulusCurve& curve) {
    const auto& in = curve.knots();
    // Input that is already concave up to rounding comes back unchanged, so
    // that the map is idempotent; interpolated knots can sit an ulp off their chord.
    bool concave = true;
    for (std::size_t i = 2; i < in.size() && concave; ++i) {
        const Knot& o = in[i - 2];
        const Knot& a = in[i - 1];
        const Knot& b = in[i];
        const double lhs = (a.w - o.w) * (b.t - o.t);
        const double rhs = (b.w - o.w) * (a.t - o.t);
        concave = lhs >= rhs - 64 * std::numeric_limits<double>::epsilon() * (std::abs(lhs) + std::abs(rhs));
    }
    if (concave) return curve;
    // Monotone chain: keep a vertex only if it lies strictly above the chord
    // joining its neighbours on the hull.
    std::vector<std::size_t> hull;
    hull.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        while (hull.size() >= 2) {
            const Knot& o = in[hull[hull.size() - 2]];
            const Knot& a = in[hull.back()];
            const Knot& b = in[i];
            const double lhs = (a.w - o.w) * (b.t - o.t);
            const double rhs = (b.w - o.w) * (a.t - o.t);
            if (lhs > rhs) break;
            hull.pop_back();
        }
        hull.push_back(i);
    }
    std::vector<Knot> out(in.size());
    std::size_t edge = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        while (edge + 1 < hull.size() && hull[edge + 1] < i) ++edge;
        const std::size_t a = hull[edge];
        if (a == i) {
            out[i] = in[i];
        } else if (edge + 1 < hull.size() && hull[edge + 1] == i) {
            out[i] = in[i];
        } else {
            out[i] = {in[i].t, chord(in[a], in[hull[edge + 1]], in[i].t)};
        }
    }
    // Rounding in the chord can break monotonicity by an ulp.
    for (std::size_t i = 1; i < out.size(); ++i) out[i].w = std::max(out[i].w, out[i - 1].w);
    return ModulusCurve(std::move(out));
}

ScalingBound scaling_bound_check(const ModulusCurve& curve, double eta, double t) {
    return scaling_bound_check(curve, concave_majorant(curve), eta, t);
}

ScalingBound scaling_bound_check(const ModulusCurve& curve, const ModulusCurve& majorant, double eta, double t) {
    if (!(eta > 0.0) || !(t > 0.0)) throw ArgumentError("scaling_bound_check: eta and t must be positive");
    if (eta * t > curve.length()) throw ExtrapolationError("scaling_bound_check: eta * t beyond the curve");
    ScalingBound r;
    const double wt = curve(t);
    if (!(wt > 0.0)) throw ArgumentError("scaling_bound_check: w(t) must be positive");
    r.omega_eta_t = curve(eta * t);
    r.majorant_eta_t = majorant(eta * t);
    r.upper = (1.0 + eta) * wt;
    r.lower_margin = r.majorant_eta_t - r.omega_eta_t;
    r.upper_margin = r.upper - r.majorant_eta_t;
    return r;
}

HolderFit holder_fit(const ModulusCurve& curve, std::pair<double, double> window) {
    const auto [lo, hi] = window;
    if (!(lo > 0.0) || !(hi > lo)) throw ArgumentError("holder_fit: window must satisfy 0 < t_min < t_max");
    std::vector<double> xs, ys;
    for (const auto& k : curve.knots()) {
        if (k.t >= lo && k.t <= hi && k.w > 0.0) {
            xs.push_back(std::log(k.t));
            ys.push_back(std::log(k.w));
        }
    }
    if (xs.size() < 5) throw ArgumentError("holder_fit: fewer than five usable knots in the window");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    HolderFit fit;
    fit.exponent = sxy / sxx;
    fit.constant = std::exp(my - fit.exponent * mx);
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.fit_window = window;
    fit.knots_used = xs.size();
    return fit;
}

} // namespace cxhess::modulus
