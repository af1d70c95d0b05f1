#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cxhess/barrier.hpp"
#include "cxhess/errors.hpp"
#include "cxhess/geometry.hpp"
#include "cxhess/hessian_core.hpp"
#include "cxhess/modulus.hpp"
#include "cxhess/radial.hpp"
#include "cxhess/random.hpp"

namespace cxhess::cli {

namespace {

Json check(const std::string& name, bool pass) {
    Json j;
    j["name"] = name;
    j["pass"] = pass;
    return j;
}

// ---------------------------------------------------------------------------
// core

Json core_cone_examples() {
    const auto in = core::gamma_m_contains(core::EigenVector{1, 2, 3}, 2);
    const auto out = core::gamma_m_contains(core::EigenVector{1, -1, 0}, 2);
    Json j = check("cone_examples", in.member && !out.member && in.h_values == std::vector<double>{6, 11});
    j["h_1_2_3"] = in.h_values;
    j["margin_1_m1_0"] = out.margin;
    return j;
}

Json core_garding(std::uint64_t seed) {
    double worst = std::numeric_limits<double>::infinity();
    std::size_t tuples = 0;
    for (int n = 1; n <= 6; ++n) {
        for (int m = 1; m <= n; ++m) {
            for (std::size_t s = 0; s < 1000; ++s) {
                SplitMix64 rng = substream(seed, s, static_cast<std::uint64_t>(100 * n + m));
                std::vector<core::HermitianForm> forms;
                for (int k = 0; k < m; ++k) forms.push_back(core::random_gamma_form(n, m, rng));
                worst = std::min(worst, core::garding_check(forms, 1e-10).margin);
                ++tuples;
            }
        }
    }
    Json j = check("garding", worst >= -1e-10);
    j["tuples"] = tuples;
    j["min_margin"] = worst;
    return j;
}

Json core_maclaurin(std::uint64_t seed) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < 1000; ++s) {
        SplitMix64 rng = substream(seed, s, 7);
        const int n = 2 + static_cast<int>(s % 5);
        const int m = 1 + static_cast<int>((s / 5) % static_cast<std::size_t>(n));
        const auto lambda = core::random_gamma_point(n, m, rng);
        const auto chain = core::maclaurin_check(lambda, m);
        for (std::size_t i = 1; i < chain.size(); ++i)
            worst = std::min(worst, chain[i - 1] - chain[i] + 1e-12 * std::max(1.0, chain[i - 1]));
    }
    Json j = check("maclaurin", worst >= 0.0);
    j["points"] = 1000;
    j["min_slack"] = worst;
    return j;
}

Json core_polarization(std::uint64_t seed) {
    double worst = 0.0;
    for (std::size_t s = 0; s < 300; ++s) {
        SplitMix64 rng = substream(seed, s, 8);
        const int n = 1 + static_cast<int>(s % 6);
        const int m = 1 + static_cast<int>((s / 6) % static_cast<std::size_t>(n));
        const auto a = core::random_gamma_form(n, m, rng);
        const std::vector<core::HermitianForm> same(static_cast<std::size_t>(m), a);
        const double direct = core::sigma_tilde(a, m);
        worst = std::max(worst, std::abs(core::polarized_form(same) - direct) / std::max(1.0, std::abs(direct)));
    }
    Json j = check("polarization_diagonal", worst <= 1e-12);
    j["max_rel_error"] = worst;
    return j;
}

Json core_inf(std::uint64_t seed) {
    double designated = 0.0, below = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < 100; ++s) {
        SplitMix64 rng = substream(seed, s, 9);
        const int n = 2 + static_cast<int>(s % 4);
        const int m = 1 + static_cast<int>((s / 4) % static_cast<std::size_t>(n));
        const auto a = core::random_gamma_form(n, m, rng);
        const auto rep = core::inf_characterization(a, m, 500, seed + s);
        designated = std::max(designated, std::abs(rep.designated - rep.exact) / std::max(1.0, rep.exact));
        below = std::min(below, rep.min_sampled - rep.exact + 1e-12 * std::max(1.0, rep.exact));
    }
    Json j = check("inf_characterization", designated <= 1e-12 && below >= 0.0);
    j["designated_max_rel_error"] = designated;
    j["min_sampled_slack"] = below;
    return j;
}

Json core_determinant(std::uint64_t seed) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < 200; ++s) {
        SplitMix64 rng = substream(seed, s, 10);
        const int n = 1 + static_cast<int>(s % 3);
        Eigen::MatrixXd g(2 * n, 2 * n);
        for (int i = 0; i < 2 * n; ++i)
            for (int k = 0; k < 2 * n; ++k) g(i, k) = rng.normal();
        const Eigen::MatrixXd q = g * g.transpose();
        const auto rep = core::real_complex_det_check(q);
        worst = std::min(worst, rep.margin / std::max(1.0, rep.constant * rep.real_det));
    }
    Json j = check("real_complex_determinant", worst >= -1e-10);
    j["min_rel_margin"] = worst;
    return j;
}

// ---------------------------------------------------------------------------
// modulus

std::vector<double> hull_oracle(const std::vector<modulus::Knot>& k) {
    std::vector<double> out(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        double best = k[i].w;
        for (std::size_t a = 0; a < i; ++a)
            for (std::size_t b = i + 1; b < k.size(); ++b)
                best = std::max(best, k[a].w + (k[b].w - k[a].w) * ((k[i].t - k[a].t) / (k[b].t - k[a].t)));
        out[i] = best;
    }
    return out;
}

Json modulus_majorant(std::uint64_t seed) {
    std::size_t mismatches = 0;
    for (std::size_t s = 0; s < 200; ++s) {
        SplitMix64 rng = substream(seed, s, 20);
        const int count = 2 + static_cast<int>(rng() % 11);
        std::vector<modulus::Knot> knots{{0.0, 0.0}};
        double t = 0.0, w = 0.0;
        for (int i = 1; i < count; ++i) {
            t += rng.uniform(0.05, 1.0);
            w += rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 1.0);
            knots.push_back({t, w});
        }
        const auto maj = modulus::concave_majorant(modulus::ModulusCurve(knots));
        const auto oracle = hull_oracle(knots);
        for (std::size_t i = 0; i < knots.size(); ++i)
            if (maj.knots()[i].w != oracle[i]) ++mismatches;
    }
    Json j = check("concave_majorant_exact", mismatches == 0);
    j["curves"] = 200;
    j["mismatches"] = mismatches;
    return j;
}

// Staircase with ramps of width delta, plus a linear term, capped; exactly
// subadditive and piecewise linear with breakpoints on the knots.
modulus::ModulusCurve subadditive_curve(SplitMix64& rng) {
    const double h = rng.uniform(0.05, 0.3);
    const double delta = h * rng.uniform(0.01, 0.5);
    const double slope = rng.uniform() < 0.5 ? 0.0 : rng.uniform(0.0, 2.0);
    const int cap = 1 + static_cast<int>(rng() % 6);
    const double length = 2.0;
    auto stair = [&](double t) {
        const double k = std::floor(t / h);
        return std::min(static_cast<double>(cap), k + std::min(1.0, (t - k * h) / delta));
    };
    std::vector<double> ts{0.0, length};
    for (int k = 0; k * h <= length; ++k) {
        ts.push_back(k * h);
        ts.push_back(k * h + delta);
    }
    for (int i = 1; i < 200; ++i) ts.push_back(length * i / 200.0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    while (ts.back() > length) ts.pop_back();
    std::vector<modulus::Knot> knots;
    for (double t : ts) knots.push_back({t, stair(t) + slope * t});
    knots[0].w = 0.0;
    for (std::size_t i = 1; i < knots.size(); ++i) knots[i].w = std::max(knots[i].w, knots[i - 1].w);
    return modulus::ModulusCurve(std::move(knots));
}

Json modulus_scaling(std::uint64_t seed) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < 1000; ++s) {
        SplitMix64 rng = substream(seed, s, 21);
        const auto curve = subadditive_curve(rng);
        const double eta = std::exp(rng.uniform(std::log(0.01), std::log(20.0)));
        const double t = rng.uniform(1e-3, curve.length() / std::max(1.0, eta));
        if (curve(t) <= 0.0) continue;
        const auto r = modulus::scaling_bound_check(curve, eta, t);
        worst = std::min(worst, std::min(r.upper_margin, r.lower_margin) / std::max(1.0, r.upper));
    }
    Json j = check("scaling_bound", worst >= -1e-12);
    j["draws"] = 1000;
    j["min_rel_margin"] = worst;
    return j;
}

Json modulus_estimate() {
    std::vector<Eigen::VectorXd> pts;
    std::vector<double> vals;
    for (int i = 0; i <= 400; ++i) {
        Eigen::VectorXd x(1);
        x(0) = -1.0 + i / 200.0;
        pts.push_back(x);
        vals.push_back(std::sqrt(std::abs(x(0))));
    }
    modulus::EstimateOptions opt;
    opt.bins = 100;
    opt.t_max = 2.0;
    const auto curve = modulus::estimate_modulus(pts, vals, opt);
    const auto fit = modulus::holder_fit(curve, {0.02, 0.5});
    Json j = check("estimate_sqrt_abs", std::abs(fit.exponent - 0.5) <= 0.05);
    j["exponent"] = fit.exponent;
    return j;
}

// ---------------------------------------------------------------------------
// barrier

struct Sandwich {
    double below = 0.0;   // max(v - U)
    double above = 0.0;   // max(U - vt)
    double boundary = 0.0;
    std::size_t points = 0;
};

Json barrier_case(const std::string& phi, std::uint64_t seed, bool fit_exponent) {
    const auto domain = geometry::Domain::ball(2, 1.0);
    const int m = 2;
    const auto data = barrier::named_boundary_data(phi, domain);
    const auto src = barrier::parse_source("zero");
    const auto v = barrier::build_subsolution(data, src, domain, m, 500, seed);
    const auto vt = barrier::build_supersolution(data, src, domain, m, 500, seed);
    auto anchors = v.xi();
    anchors.resize(std::min<std::size_t>(32, anchors.size()));
    const auto grid = geometry::evaluation_grid(domain, 10000, anchors, seed);
    const auto lo = v.evaluate_all(grid.points);
    const auto hi = vt.evaluate_all(grid.points);
    const auto exact = *barrier::exact_solution(phi, "zero", domain, m);
    Sandwich s;
    s.below = s.above = -std::numeric_limits<double>::infinity();
    std::vector<double> u(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        u[i] = exact(grid.points[i]);
        s.below = std::max(s.below, lo[i] - u[i]);
        s.above = std::max(s.above, u[i] - hi[i]);
    }
    for (const auto& x : v.xi())
        s.boundary = std::max({s.boundary, std::abs(v(x) - data.phi(x)), std::abs(vt(x) - data.phi(x))});
    bool pass = s.below <= 1e-8 && s.above <= 1e-8 && s.boundary <= 1e-6;
    if (phi.rfind("const:", 0) == 0) {
        const double c = data.phi(domain.barycenter());
        for (std::size_t i = 0; i < grid.points.size(); ++i) pass = pass && lo[i] == c && hi[i] == c;
    }
    Json j = check("barrier_" + phi, pass);
    j["grid_points"] = grid.points.size();
    j["xi_count"] = v.xi().size();
    j["max_v_minus_U"] = s.below;
    j["max_U_minus_vtilde"] = s.above;
    j["boundary_error"] = s.boundary;
    if (fit_exponent) {
        const auto fit = barrier::local_holder_fit(grid.points, u, domain.diameter());
        j["holder_exponent_U"] = fit.exponent;
        const bool ok = std::abs(fit.exponent - 0.5) <= 0.05;
        j["pass"] = pass && ok;
    }
    return j;
}

Json barrier_probe(std::uint64_t seed) {
    const auto domain = geometry::Domain::ball(2, 1.0);
    const auto data = barrier::named_boundary_data("psi_sqrt", domain);
    const auto v = barrier::build_subsolution(data, barrier::parse_source("zero"), domain, 2, 500, seed);
    const auto probe = barrier::probe_subharmonic(v, 1000, seed);
    Json j = check("subharmonic_probe", probe.pass);
    j["probed"] = probe.probed;
    j["smooth"] = probe.smooth;
    j["min_cone_margin"] = probe.min_cone_margin;
    return j;
}

// ---------------------------------------------------------------------------
// radial

Json radial_closed_form() {
    double worst = 0.0;
    for (const auto& [n, m] : {std::pair{2, 1}, {2, 2}, {3, 2}, {3, 3}}) {
        for (const double alpha : {0.5, 1.0, static_cast<double>(m), 1.9 * m}) {
            radial::RadialProblem pb;
            pb.n = n;
            pb.m = m;
            pb.density = radial::Density::power(alpha);
            pb.convention = radial::Convention::paper;
            const auto sol = radial::radial_solve(pb, 2000);
            for (std::size_t i = 0; i < sol.r.size(); ++i) {
                if (sol.r[i] < 0.01 || sol.r[i] >= 1.0) continue;
                const double c = radial::power_closed_form(n, m, alpha, sol.B_used, sol.r[i]);
                worst = std::max(worst, std::abs(sol.U[i] - c) / std::abs(c));
            }
        }
    }
    Json j = check("power_closed_form", worst <= 1e-8);
    j["max_rel_error"] = worst;
    return j;
}

Json radial_residual() {
    double worst = 0.0;
    for (const auto& [n, m] : {std::pair{2, 1}, {2, 2}, {3, 2}, {3, 3}}) {
        for (const auto& d : {radial::Density::constant(1.0), radial::Density::constant(2.5), radial::Density::power(0.5),
                              radial::Density::power(static_cast<double>(m))}) {
            radial::RadialProblem pb;
            pb.n = n;
            pb.m = m;
            pb.density = d;
            const auto sol = radial::radial_solve(pb, 2000);
            worst = std::max(worst, radial::radial_hessian_residual(sol, pb).max_residual);
        }
    }
    // Under the "paper" convention S_m comes out as f / C(n, m).
    radial::RadialProblem pb;
    pb.n = 3;
    pb.m = 2;
    pb.convention = radial::Convention::paper;
    const auto sol = radial::radial_solve(pb, 2000);
    const auto rep = radial::radial_hessian_residual(sol, pb);
    const double ratio = std::pow(rep.mean_ratio, 1.0 / pb.m);
    const double expected = std::pow(core::binomial(3, 2), -1.0 / 2);
    Json j = check("hessian_residual", worst <= 1e-4 && std::abs(ratio - expected) <= 5e-4 * expected);
    j["max_residual_form"] = worst;
    j["paper_ratio"] = ratio;
    j["expected_ratio"] = expected;
    return j;
}

Json radial_holder() {
    const std::vector<std::tuple<int, int, double>> cases = {
        {2, 1, 0.5}, {2, 1, 1.5}, {2, 1, 1.9}, {2, 2, 1.0}, {2, 2, 3.0},  {2, 2, 8.0 / 3.0 - 0.01},
        {3, 2, 1.0}, {3, 2, 2.0}, {3, 2, 3.5}, {3, 3, 1.5}, {3, 3, 4.5}, {3, 1, 1.2}};
    Json rows = Json::array();
    bool pass = true;
    for (const auto& [n, m, alpha] : cases) {
        radial::RadialProblem pb;
        pb.n = n;
        pb.m = m;
        pb.density = radial::Density::power(alpha);
        const auto sol = radial::radial_solve(pb, 2000);
        const auto h = radial::holder_exponent_check(pb, sol);
        pass = pass && h.pass;
        rows.push_back({{"n", n}, {"m", m}, {"alpha", alpha}, {"fit", h.fit.exponent}, {"expected", h.expected}});
    }
    Json j = check("holder_exponents", pass);
    j["cases"] = rows;
    return j;
}

Json radial_calibration() {
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n)
        for (int m = 1; m <= n; ++m)
            worst = std::max(worst, std::abs(radial::calibrate_convention(n, m) / radial::b_constant(n, m, radial::Convention::form) - 1.0));
    Json j = check("calibration", worst <= 1e-10);
    j["max_rel_error"] = worst;
    return j;
}

Json radial_log() {
    const auto a = radial::log_example_check(0.6, 2, 1);
    const auto b = radial::log_example_check(4.0, 2, 2);
    const auto c = radial::log_example_check(1.5, 3, 2);
    const bool pass = !a.bounded && a.abs_u_increasing && a.bound_holds && b.bounded && b.bound_holds && !c.bounded &&
                      c.abs_u_increasing && c.bound_holds;
    Json j = check("log_example", pass);
    j["n2_m1_gamma0.6"] = {{"bounded", a.bounded}, {"abs_u_1e-8", a.abs_u.back()}, {"C", a.fitted_c}};
    j["n2_m2_gamma4"] = {{"bounded", b.bounded}, {"abs_u_1e-8", b.abs_u.back()}, {"C", b.fitted_c}};
    j["n3_m2_gamma1.5"] = {{"bounded", c.bounded}, {"abs_u_1e-8", c.abs_u.back()}, {"C", c.fitted_c}};
    return j;
}

Json radial_gamma() {
    const double g = radial::gamma_exponent(2, 1, 3.0, 1.0).gamma_r;
    bool mono = true;
    for (int i = 0; i < 20; ++i) {
        for (int k = 0; k < 20; ++k) {
            const double r = 1.0 + i * 0.5, p = 2.0 + k * 0.5;
            const double base = radial::gamma_exponent(3, 2, p, r).gamma_r;
            if (i + 1 < 20 && !(radial::gamma_exponent(3, 2, p, r + 0.5).gamma_r > base)) mono = false;
            if (k + 1 < 20 && !(radial::gamma_exponent(3, 2, p + 0.5, r).gamma_r > base)) mono = false;
        }
    }
    const double limit = radial::gamma_exponent(3, 3, 1e6, 1.0).gamma_r;
    Json j = check("gamma_exponent", std::abs(g - 1.0 / 7.0) <= 1e-15 && mono && std::abs(limit - 0.25) <= 1e-4);
    j["gamma_2_1_3_1"] = g;
    j["limit_n3"] = limit;
    return j;
}

Json finish(Json checks) {
    bool pass = true;
    for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
    Json j;
    j["checks"] = std::move(checks);
    j["pass"] = pass;
    return j;
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"core", "modulus", "barrier", "radial"};
    return names;
}

Json run_suite(const std::string& suite, std::uint64_t seed) {
    Json checks = Json::array();
    if (suite == "core") {
        checks.push_back(core_cone_examples());
        checks.push_back(core_garding(seed));
        checks.push_back(core_maclaurin(seed));
        checks.push_back(core_polarization(seed));
        checks.push_back(core_inf(seed));
        checks.push_back(core_determinant(seed));
    } else if (suite == "modulus") {
        checks.push_back(modulus_majorant(seed));
        checks.push_back(modulus_scaling(seed));
        checks.push_back(modulus_estimate());
    } else if (suite == "barrier") {
        checks.push_back(barrier_case("const:0.3", seed, false));
        checks.push_back(barrier_case("re_z1", seed, false));
        checks.push_back(barrier_case("psi_sqrt", seed, true));
        checks.push_back(barrier_probe(seed));
    } else if (suite == "radial") {
        checks.push_back(radial_closed_form());
        checks.push_back(radial_residual());
        checks.push_back(radial_holder());
        checks.push_back(radial_calibration());
        checks.push_back(radial_log());
        checks.push_back(radial_gamma());
    } else {
        throw ArgumentError("unknown suite '" + suite + "'");
    }
    return finish(std::move(checks));
}

} // namespace cxhess::cli
