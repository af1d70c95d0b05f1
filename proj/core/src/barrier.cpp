#include "cxhess/barrier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "cxhess/errors.hpp"
#include "cxhess/hessian_core.hpp"
#include "cxhess/parallel.hpp"
#include "cxhess/random.hpp"

namespace cxhess::barrier {

namespace {

constexpr int curve_knots = 2000;

double parse_value(const std::string& text, std::size_t from, const std::string& context) {
    double v = 0.0;
    const char* begin = text.data() + from;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ArgumentError("'" + context + "': bad number");
    return v;
}

// max |z - z0| over the boundary and the oscillation of |z - z0|^2 there,
// with z0 the barycenter.
std::pair<double, double> boundary_spread(const Domain& domain) {
    if (domain.kind() == geometry::DomainKind::ball) return {domain.radius(), 0.0};
    const auto& a = domain.weights();
    const double lo = *std::min_element(a.begin(), a.end());
    const double hi = *std::max_element(a.begin(), a.end());
    return {1.0 / std::sqrt(lo), 1.0 / lo - 1.0 / hi};
}

double rho_noise(const Point& z) { return 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + z.squaredNorm()); }

} // namespace

BoundaryData BoundaryData::negated() const {
    BoundaryData out = *this;
    out.name = "-" + name;
    auto inner = phi;
    out.phi = [inner](const Point& z) { return -inner(z); };
    return out;
}

BoundaryData named_boundary_data(const std::string& spec, const Domain& domain) {
    const double d = domain.diameter();
    BoundaryData data;
    data.name = spec;
    data.omega_supplied = true;
    if (spec == "re_z1") {
        data.phi = [](const Point& z) { return z(0).real(); };
        data.omega_phi = modulus::ModulusCurve::from_function([](double t) { return t; }, d, curve_knots);
        data.sup_norm = domain.kind() == geometry::DomainKind::ball ? domain.radius()
                                                                    : 1.0 / std::sqrt(domain.weights()[0]);
        return data;
    }
    if (spec == "psi_sqrt") {
        if (domain.kind() != geometry::DomainKind::ball || domain.radius() != 1.0)
            throw ArgumentError("psi_sqrt is defined on the unit ball only");
        // On the unit sphere this equals -|z - p|/2 with p = (-1, 0, ..., 0).
        data.phi = [](const Point& z) { return -std::sqrt(std::max(0.0, (1.0 + z(0).real()) / 2.0)); };
        data.omega_phi = modulus::ModulusCurve::from_function([](double t) { return t / 2.0; }, d, curve_knots);
        data.sup_norm = 1.0;
        return data;
    }
    if (spec.rfind("const:", 0) == 0) {
        const double c = parse_value(spec, 6, spec);
        data.phi = [c](const Point&) { return c; };
        data.omega_phi = modulus::ModulusCurve::from_function([](double) { return 0.0; }, d, curve_knots);
        data.sup_norm = std::abs(c);
        return data;
    }
    throw ArgumentError("unknown boundary data '" + spec + "'");
}

BoundaryData estimated_boundary_data(std::string name, Evaluator phi, const Domain& domain, std::size_t samples,
                                     int bins, std::uint64_t seed) {
    auto pts = domain.axis_points();
    const auto extra = geometry::sample_boundary(domain, samples, seed);
    pts.insert(pts.end(), extra.begin(), extra.end());
    std::vector<Eigen::VectorXd> real;
    std::vector<double> values;
    real.reserve(pts.size());
    values.reserve(pts.size());
    double sup = 0.0;
    for (const auto& z : pts) {
        real.push_back(geometry::to_real(z));
        values.push_back(phi(z));
        sup = std::max(sup, std::abs(values.back()));
    }
    modulus::EstimateOptions opt;
    opt.bins = bins;
    opt.t_max = domain.diameter();
    opt.seed = seed;
    const auto raw = modulus::estimate_modulus(real, values, opt);
    auto knots = raw.knots();
    for (std::size_t k = 1; k + 1 < knots.size(); ++k) knots[k].w = knots[k + 1].w;

    BoundaryData data;
    data.name = std::move(name);
    data.phi = std::move(phi);
    data.omega_phi = modulus::ModulusCurve(std::move(knots));
    data.sup_norm = sup;
    data.omega_supplied = false;
    return data;
}

Source parse_source(const std::string& spec) {
    Source s;
    if (spec == "zero") return s;
    if (spec.rfind("const:", 0) == 0) {
        const double c = parse_value(spec, 6, spec);
        if (c < 0.0) throw ArgumentError("source must be nonnegative");
        s.name = spec;
        s.f = [c](const Point&) { return c; };
        s.sup = c;
        return s;
    }
    throw ArgumentError("unknown source '" + spec + "'");
}

std::optional<Evaluator> exact_solution(const std::string& data, const std::string& source, const Domain& domain,
                                        int m) {
    const Source src = parse_source(source);
    const bool zero = src.sup == 0.0;
    if (data.rfind("const:", 0) == 0) {
        const double c = parse_value(data, 6, data);
        if (zero) return Evaluator([c](const Point&) { return c; });
        if (domain.kind() != geometry::DomainKind::ball) return std::nullopt;
        const double a = std::pow(src.sup, 1.0 / m);
        const double r2 = domain.radius() * domain.radius();
        return Evaluator([c, a, r2](const Point& z) { return c + a * (z.squaredNorm() - r2); });
    }
    if (!zero) return std::nullopt;
    if (data == "re_z1") return Evaluator([](const Point& z) { return z(0).real(); });
    if (data == "psi_sqrt" && m >= 2 && domain.kind() == geometry::DomainKind::ball && domain.radius() == 1.0)
        return Evaluator([](const Point& z) { return -std::sqrt(std::max(0.0, (1.0 + z(0).real()) / 2.0)); });
    return std::nullopt;
}

// ---------------------------------------------------------------------------

double BarrierContext::shifted(const Point& z) const {
    const double base = data.phi(z);
    if (params.K1 == 0.0) return base;
    return base - params.K1 * (z - params.z0).squaredNorm();
}

std::shared_ptr<const BarrierContext> make_context(const Domain& domain, int m, BoundaryData data, Source source,
                                                   std::uint64_t seed, const BarrierOptions& options) {
    const int n = domain.dimension();
    if (m < 1 || m > n) throw ArgumentError("barrier: m outside [1, n]");
    const double d = domain.diameter();
    if (data.omega_phi.length() < d * (1.0 - 1e-12))
        throw ArgumentError("barrier: omega_phi must be defined on [0, diameter]");

    auto ctx = std::make_shared<BarrierContext>(BarrierContext{domain, m, std::move(data), std::move(source)});
    ctx->options = options;
    auto& p = ctx->params;
    p.diameter = d;
    p.lip_rho = domain.lipschitz_rho();
    p.z0 = domain.barycenter();
    p.K1 = std::pow(ctx->source.sup, 1.0 / m);
    p.A = geometry::pseudoconvexity_constant(domain, m, 500, seed ^ 0xa11ceULL);

    // Smallest 2^k / A with B hess(rho) - I in Gamma_m at every probe.
    auto hess_probes = geometry::sample_interior(domain, 500, seed ^ 0xb0b0ULL);
    const auto collar = geometry::sample_collar(domain, 500, 0.01 * d, seed ^ 0xb0b0ULL);
    hess_probes.insert(hess_probes.end(), collar.begin(), collar.end());
    const auto identity = core::HermitianForm::identity(n);
    for (int k = 0; k <= 60; ++k) {
        const double B = std::ldexp(1.0, k) / p.A;
        bool ok = true;
        for (const auto& z : hess_probes) {
            if (!core::gamma_m_contains((domain.hess_rho(z) * B - identity).eigenvalues(), m).member) {
                ok = false;
                break;
            }
        }
        if (ok) {
            p.B = B;
            break;
        }
    }
    if (p.B == 0.0) throw ParameterError("barrier: no admissible B found");

    // Modulus of phi - K1 |z - z0|^2 on the boundary.
    const auto [reach, osc_sq] = boundary_spread(domain);
    std::vector<modulus::Knot> knots = ctx->data.omega_phi.knots();
    for (auto& k : knots) k.w += p.K1 * std::min(2.0 * reach * k.t, osc_sq);
    ctx->omega_shifted = modulus::ModulusCurve(std::move(knots));
    ctx->majorant = modulus::concave_majorant(ctx->omega_shifted);

    ctx->probes = geometry::sample_interior(domain, options.probe_points, seed ^ 0x9e0beULL);
    auto edge = domain.axis_points();
    const auto edge_samples = geometry::sample_boundary(domain, options.probe_points, seed ^ 0xed9eULL);
    edge.insert(edge.end(), edge_samples.begin(), edge_samples.end());
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& z : edge) inf = std::min(inf, ctx->shifted(z));
    p.gamma2 = inf;
    ctx->probes.insert(ctx->probes.end(), edge.begin(), edge.end());
    return ctx;
}

PointBarrier::PointBarrier(std::shared_ptr<const BarrierContext> context, const Point& xi)
    : ctx_(std::move(context)), xi_(xi) {
    const auto& c = *ctx_;
    const auto& p = c.params;
    const double d = p.diameter;
    if (std::abs(c.domain.rho(xi)) > 1e-10 * std::max(1.0, d * d))
        throw ParameterError("point barrier: xi is not on the boundary");
    auto g_abs = [&](const Point& z) { return std::abs(p.B * c.domain.rho(z) - (z - xi).squaredNorm()); };
    if (c.options.radius) {
        r_ = *c.options.radius;
        if (!(r_ > 0.0)) throw ParameterError("point barrier: radius must be positive");
        for (const auto& z : c.probes)
            if ((z - xi).norm() < r_ && g_abs(z) > d * d * (1.0 + 1e-12))
                throw ParameterError("point barrier: |g| exceeds d^2 inside B(xi, r)");
    } else {
        r_ = d;
        for (const auto& z : c.probes)
            if (g_abs(z) > d * d) r_ = std::min(r_, (z - xi).norm());
        if (!(r_ > 1e-6 * d)) throw ParameterError("point barrier: no admissible radius");
    }
    r1_ = r_ / 2.0;
    shifted_xi_ = c.shifted(xi);
    const double w_r1 = c.majorant(std::min(r1_, c.majorant.length()));
    const double drop = shifted_xi_ - p.gamma2;
    double g1 = d / r1_;
    // Drops at rounding level come from evaluating constant data.
    if (drop > 1e-12 * (1.0 + std::abs(p.gamma2))) {
        if (!(w_r1 > 0.0)) throw ParameterError("point barrier: modulus vanishes at r1 for nonconstant data");
        g1 = std::max(g1, drop / w_r1);
    }
    gamma1_ = c.options.gamma_safety * g1;
}

BranchValue PointBarrier::evaluate(const Point& z) const { return evaluate(z, ctx_->domain.rho(z)); }

BranchValue PointBarrier::evaluate(const Point& z, double rho_z) const {
    const auto& c = *ctx_;
    const auto& p = c.params;
    const double lift = p.K1 == 0.0 ? 0.0 : p.K1 * (z - p.z0).squaredNorm();
    const double dist2 = (z - xi_).squaredNorm();
    if (dist2 >= r1_ * r1_) return {p.gamma2 + lift, 0};
    // Rounding leaves boundary points a few ulps off rho = 0; treat them as on it.
    if (std::abs(rho_z) <= rho_noise(z)) rho_z = 0.0;
    const double g = p.B * std::min(rho_z, 0.0) - dist2;
    const double s = std::min(std::sqrt(std::max(0.0, -g)), c.majorant.length());
    const double first = shifted_xi_ - gamma1_ * c.majorant(s);
    if (first >= p.gamma2) return {first + lift, 1};
    return {p.gamma2 + lift, 0};
}

PointBarrier build_point_barrier(std::shared_ptr<const BarrierContext> context, const Point& xi) {
    return PointBarrier(std::move(context), xi);
}

// ---------------------------------------------------------------------------

Envelope::Envelope(std::shared_ptr<const BarrierContext> context, std::vector<Point> xi, bool negate)
    : ctx_(std::move(context)), xi_(std::move(xi)), negate_(negate) {
    if (xi_.empty()) throw ArgumentError("envelope: need at least one boundary point");
    barriers_.reserve(xi_.size());
    for (const auto& x : xi_) barriers_.emplace_back(ctx_, x);
}

EnvelopeValue Envelope::evaluate(const Point& z) const {
    const double rho_z = ctx_->domain.rho(z);
    EnvelopeValue best;
    best.value = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < barriers_.size(); ++i) {
        const auto b = barriers_[i].evaluate(z, rho_z);
        if (b.value > best.value) best = {b.value, i, b.branch};
    }
    if (negate_) best.value = -best.value;
    return best;
}

std::vector<double> Envelope::evaluate_all(const std::vector<Point>& points) const {
    std::vector<double> out(points.size());
    parallel_for(points.size(), [&](std::size_t i) { out[i] = evaluate(points[i]).value; });
    return out;
}

BarrierParams Envelope::params() const {
    BarrierParams p = ctx_->params;
    p.r = std::numeric_limits<double>::infinity();
    p.r1 = std::numeric_limits<double>::infinity();
    p.gamma1 = 0.0;
    for (const auto& b : barriers_) {
        p.r = std::min(p.r, b.r());
        p.r1 = std::min(p.r1, b.r1());
        p.gamma1 = std::max(p.gamma1, b.gamma1());
    }
    return p;
}

std::vector<Point> boundary_points(const Domain& domain, std::size_t xi_count, std::uint64_t seed) {
    auto pts = domain.axis_points();
    if (xi_count > 0) {
        const auto extra = geometry::sample_boundary(domain, xi_count, seed);
        pts.insert(pts.end(), extra.begin(), extra.end());
    }
    return pts;
}

Envelope build_subsolution(const BoundaryData& data, const Source& source, const Domain& domain, int m,
                           std::size_t xi_count, std::uint64_t seed, const BarrierOptions& options) {
    if (xi_count < 1) throw ArgumentError("build_subsolution: xi_count must be >= 1");
    auto ctx = make_context(domain, m, data, source, seed, options);
    return Envelope(std::move(ctx), boundary_points(domain, xi_count, seed), false);
}

Envelope build_supersolution(const BoundaryData& data, const Source& source, const Domain& domain, int m,
                             std::size_t xi_count, std::uint64_t seed, const BarrierOptions& options) {
    if (xi_count < 1) throw ArgumentError("build_supersolution: xi_count must be >= 1");
    auto ctx = make_context(domain, m, data.negated(), source, seed, options);
    return Envelope(std::move(ctx), boundary_points(domain, xi_count, seed), true);
}

// ---------------------------------------------------------------------------

SubharmonicProbe probe_subharmonic(const Envelope& v, std::size_t count, std::uint64_t seed, double step, double tol,
                                   int alpha_samples) {
    const auto& ctx = v.context();
    const int n = ctx.domain.dimension();
    const int m = ctx.m;
    const int dim = 2 * n;
    const double sign = v.negated() ? -1.0 : 1.0;
    const auto points = geometry::sample_interior(ctx.domain, count, seed);

    struct Outcome {
        bool smooth = false;
        double cone = 0.0;
        double gap = 0.0;
    };
    std::vector<Outcome> outcomes(points.size());
    parallel_for(
        points.size(),
        [&](std::size_t idx) {
            const Eigen::VectorXd x = geometry::to_real(points[idx]);
            const auto center = v.evaluate(points[idx]);
            // The barrier branch varies on the scale -g = |z - xi|^2 - B rho(z)
            // of the winning xi; shrink the stencil with it.
            double h = step;
            if (center.branch == 1) {
                const auto& xi = v.barriers()[center.winner].xi();
                const double scale_g = (points[idx] - xi).squaredNorm() - ctx.params.B * ctx.domain.rho(points[idx]);
                h = std::clamp(3e-4 * scale_g, 1e-7, step);
            }
            bool smooth = true;
            auto at = [&](const Eigen::VectorXd& y) {
                const auto e = v.evaluate(geometry::from_real(y));
                if (e.winner != center.winner || e.branch != center.branch) smooth = false;
                return sign * e.value;
            };
            const double f0 = sign * center.value;
            Eigen::MatrixXd q(dim, dim);
            for (int i = 0; i < dim; ++i) {
                Eigen::VectorXd y = x;
                y(i) += h;
                const double plus = at(y);
                y(i) -= 2.0 * h;
                const double minus = at(y);
                q(i, i) = (plus - 2.0 * f0 + minus) / (h * h);
                for (int j = 0; j < i; ++j) {
                    Eigen::VectorXd w = x;
                    w(i) += h;
                    w(j) += h;
                    const double pp = at(w);
                    w(j) -= 2.0 * h;
                    const double pm = at(w);
                    w(i) -= 2.0 * h;
                    const double mm = at(w);
                    w(j) += 2.0 * h;
                    const double mp = at(w);
                    q(i, j) = q(j, i) = (pp - pm - mp + mm) / (4.0 * h * h);
                }
            }
            Outcome out;
            out.smooth = smooth;
            if (!smooth) {
                outcomes[idx] = out;
                return;
            }
            const auto form = core::complex_hessian_from_real(q);
            const auto lambda = form.eigenvalues();
            const double scale = std::max(1.0, lambda.max_abs());
            std::vector<double> scaled(lambda.values().begin(), lambda.values().end());
            for (auto& l : scaled) l /= scale;
            out.cone = core::gamma_m_contains(core::EigenVector(scaled), m, 0.0).margin;
            const double target = std::pow(ctx.source.f(points[idx]), 1.0 / m);
            double gap = std::numeric_limits<double>::infinity();
            for (int s = 0; s < alpha_samples; ++s) {
                SplitMix64 rng = substream(seed, idx * 64 + static_cast<std::size_t>(s), 0xa1);
                std::vector<core::HermitianForm> alphas;
                for (int k = 0; k + 1 < m; ++k) alphas.push_back(core::random_sigma_form(n, m, rng));
                gap = std::min(gap, (core::l_alpha(form, alphas) - target) / scale);
            }
            out.gap = gap;
            outcomes[idx] = out;
        },
        4);

    SubharmonicProbe rep;
    rep.probed = points.size();
    rep.min_cone_margin = std::numeric_limits<double>::infinity();
    rep.min_l_alpha_gap = std::numeric_limits<double>::infinity();
    for (const auto& o : outcomes) {
        if (!o.smooth) continue;
        ++rep.smooth;
        rep.min_cone_margin = std::min(rep.min_cone_margin, o.cone);
        rep.min_l_alpha_gap = std::min(rep.min_l_alpha_gap, o.gap);
    }
    if (rep.smooth == 0) {
        rep.min_cone_margin = 0.0;
        rep.min_l_alpha_gap = 0.0;
    }
    rep.pass = rep.smooth > 0 && rep.min_cone_margin >= -tol && rep.min_l_alpha_gap >= -tol;
    return rep;
}

double default_ceiling(const BarrierParams& p) {
    const double d = p.diameter;
    return (p.gamma1 * (1.0 + std::sqrt(2.0 * d + p.B * p.lip_rho)) + 2.0 * std::sqrt(d)) * (1.0 + 2.0 * d);
}

BarrierReport verify_modulus_bound(const std::vector<Point>& points, const std::vector<double>& values,
                                   const BoundaryData& data, double f_sup, int m, double diameter, int bins,
                                   double ceiling) {
    if (points.size() != values.size()) throw ArgumentError("verify_modulus_bound: size mismatch");
    if (m < 1) throw ArgumentError("verify_modulus_bound: m must be positive");
    std::vector<Eigen::VectorXd> real;
    real.reserve(points.size());
    for (const auto& z : points) real.push_back(geometry::to_real(z));
    modulus::EstimateOptions opt;
    opt.bins = bins;
    opt.t_max = diameter;
    BarrierReport rep;
    rep.omega_v = modulus::estimate_modulus(real, values, opt);
    rep.ceiling = ceiling;
    const double lift = 1.0 + std::pow(f_sup, 1.0 / m);
    const double len = data.omega_phi.length();
    for (const auto& k : rep.omega_v.knots()) {
        if (k.t == 0.0) continue;
        const double root = std::sqrt(k.t);
        const double bound = lift * std::max(data.omega_phi(std::min(root, len)), root);
        rep.eta_fitted = std::max(rep.eta_fitted, k.w / bound);
        if (k.w > ceiling * bound * (1.0 + 1e-12)) rep.violations.push_back(k.t);
    }
    rep.lambda_bound = rep.eta_fitted * lift;
    rep.pass = rep.violations.empty();
    return rep;
}

modulus::HolderFit local_holder_fit(const std::vector<Point>& points, const std::vector<double>& values,
                                    double diameter) {
    std::vector<Eigen::VectorXd> real;
    real.reserve(points.size());
    for (const auto& z : points) real.push_back(geometry::to_real(z));
    modulus::EstimateOptions opt;
    opt.bins = 200;
    opt.t_max = 0.01 * diameter;
    const auto curve = modulus::estimate_modulus(real, values, opt);
    return modulus::holder_fit(curve, {5e-5 * diameter * (1.0 - 1e-9), 5e-3 * diameter * (1.0 + 1e-9)});
}

std::string params_json(const BarrierParams& p) {
    nlohmann::ordered_json j;
    j["A"] = p.A;
    j["B"] = p.B;
    j["r"] = p.r;
    j["r1"] = p.r1;
    j["gamma1"] = p.gamma1;
    j["gamma2"] = p.gamma2;
    j["K1"] = p.K1;
    std::vector<std::vector<double>> z0;
    for (Eigen::Index i = 0; i < p.z0.size(); ++i) z0.push_back({p.z0(i).real(), p.z0(i).imag()});
    j["z0"] = z0;
    j["diameter"] = p.diameter;
    j["lip_rho"] = p.lip_rho;
    return j.dump();
}

} // namespace cxhess::barrier
