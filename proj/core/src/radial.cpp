#include "cxhess/radial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cxhess/errors.hpp"
#include "cxhess/hessian_core.hpp"
#include "cxhess/parallel.hpp"
#include "cxhess/quadrature.hpp"

namespace cxhess::radial {

namespace {

double parse_number(std::string_view text, std::string_view context) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ArgumentError("density '" + std::string(context) + "': bad number");
    return v;
}

// I(t) = K t^e for t <= limit.
struct PowerHead {
    double K = 0.0;
    double e = 0.0;
    double limit = 0.0;
};

std::optional<PowerHead> power_head(const RadialProblem& pb) {
    const auto& d = pb.density;
    const double two_n = 2.0 * pb.n;
    switch (d.kind()) {
    case Density::Kind::constant:
        return PowerHead{d.c0() / two_n, two_n, std::numeric_limits<double>::infinity()};
    case Density::Kind::power:
        return PowerHead{1.0 / (two_n - d.alpha()), two_n - d.alpha(), std::numeric_limits<double>::infinity()};
    case Density::Kind::table: {
        const auto& s = d.radii();
        const auto& f = d.values();
        const double k = std::log(f[1] / f[0]) / std::log(s[1] / s[0]);
        const double e = two_n + k;
        return PowerHead{f[0] * std::pow(s[0], -k) / e, e, s[0]};
    }
    case Density::Kind::log_example:
        return std::nullopt;
    }
    return std::nullopt;
}

// int_a^b s^{2n-1} c (s/s0)^k ds
double power_piece(int n, double c, double s0, double k, double a, double b) {
    const double e = 2.0 * n + k;
    const double scale = c * std::pow(s0, -k);
    if (std::abs(e) < 1e-14) return scale * std::log(b / a);
    return scale * (std::pow(b, e) - std::pow(a, e)) / e;
}

// J(s) = int_0^inf exp(-2(n-m)u) (1+s+u)^{-gamma} du for n > m, and the
// closed form (1+s)^{1-gamma}/(gamma-1) for n = m.
double log_j(int n, int m, double gamma, double s) {
    if (n == m) {
        if (!(gamma > 1.0)) throw DomainError("inner integral diverges for this log density (needs gamma > 1 when n = m)");
        return std::pow(1.0 + s, 1.0 - gamma) / (gamma - 1.0);
    }
    const double c = 2.0 * (n - m);
    const double upper = 45.0 / c;
    quad::Options opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 1e-14;
    const auto r = quad::integrate([&](double u) { return std::exp(-c * u) * std::pow(1.0 + s + u, -gamma); }, 0.0,
                                   upper, opt);
    return r.value;
}

// U in the s = -log t variable: B int_{s_a}^{s_b} J(s)^{1/m} ds.
quad::Result log_outer(const RadialProblem& pb, double sa, double sb, double tol) {
    quad::Options opt;
    opt.abs_tol = tol;
    opt.rel_tol = 1e-14;
    const double inv_m = 1.0 / pb.m;
    return quad::integrate(
        [&](double s) { return std::pow(log_j(pb.n, pb.m, pb.density.gamma(), s), inv_m); }, sa, sb, opt);
}

double outer_integrand(const RadialProblem& pb, double t) {
    const double inner = inner_integral(pb, t);
    return std::pow(t, 1.0 - 2.0 * pb.n / pb.m) * std::pow(inner, 1.0 / pb.m);
}

// int_a^b of the outer integrand where the head power law applies.
double head_outer(const RadialProblem& pb, const PowerHead& h, double a, double b) {
    const double q1 = 2.0 - (2.0 * pb.n - h.e) / pb.m;
    const double k = std::pow(h.K, 1.0 / pb.m);
    if (std::abs(q1) < 1e-14) {
        if (a == 0.0) return std::numeric_limits<double>::infinity();
        return k * std::log(b / a);
    }
    if (a == 0.0 && q1 < 0.0) return std::numeric_limits<double>::infinity();
    return k * (std::pow(b, q1) - std::pow(a, q1)) / q1;
}

quad::Result outer_cell(const RadialProblem& pb, double a, double b, double tol) {
    quad::Options opt;
    opt.abs_tol = tol;
    opt.rel_tol = 1e-14;
    return quad::integrate([&](double t) { return outer_integrand(pb, t); }, a, b, opt);
}

bool u0_finite(const RadialProblem& pb) {
    const auto head = power_head(pb);
    if (!head) return false;
    return 2.0 - (2.0 * pb.n - head->e) / pb.m > 1e-14;
}

} // namespace

std::string to_string(Convention c) { return c == Convention::paper ? "paper" : "form"; }

Convention parse_convention(std::string_view text) {
    if (text == "paper") return Convention::paper;
    if (text == "form") return Convention::form;
    throw ArgumentError("convention must be 'paper' or 'form'");
}

// ---------------------------------------------------------------------------

Density Density::constant(double c0) {
    if (!(c0 >= 0.0) || !std::isfinite(c0)) throw ArgumentError("const density must be finite and >= 0");
    Density d;
    d.kind_ = Kind::constant;
    d.c0_ = c0;
    return d;
}

Density Density::power(double alpha) {
    if (!std::isfinite(alpha)) throw ArgumentError("power density: alpha must be finite");
    Density d;
    d.kind_ = Kind::power;
    d.alpha_ = alpha;
    return d;
}

Density Density::log_example(double gamma) {
    if (!std::isfinite(gamma)) throw ArgumentError("log density: gamma must be finite");
    Density d;
    d.kind_ = Kind::log_example;
    d.gamma_ = gamma;
    return d;
}

Density Density::table(std::vector<double> radii, std::vector<double> values) {
    if (radii.size() != values.size() || radii.size() < 2) throw ArgumentError("table density: need >= 2 (s, f) pairs");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !(values[i] > 0.0) || !std::isfinite(radii[i]) || !std::isfinite(values[i]))
            throw ArgumentError("table density: radii and values must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw ArgumentError("table density: radii must increase");
    }
    Density d;
    d.kind_ = Kind::table;
    d.radii_ = std::move(radii);
    d.values_ = std::move(values);
    return d;
}

Density Density::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw ArgumentError("density '" + std::string(text) + "': expected kind:value");
    const auto kind = text.substr(0, colon);
    const auto arg = text.substr(colon + 1);
    if (kind == "const") return constant(parse_number(arg, text));
    if (kind == "power") return power(parse_number(arg, text));
    if (kind == "log") return log_example(parse_number(arg, text));
    if (kind == "table") {
        std::ifstream in{std::string(arg)};
        if (!in) throw ArgumentError("density table: cannot open '" + std::string(arg) + "'");
        std::vector<double> s, f;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos) throw ArgumentError("density table: expected 's,f' rows");
            const std::string_view row(line);
            const auto a = row.substr(0, comma);
            const auto b = row.substr(comma + 1);
            double x = 0.0;
            if (std::from_chars(a.data(), a.data() + a.size(), x).ec != std::errc()) continue; // header
            s.push_back(parse_number(a, text));
            f.push_back(parse_number(b, text));
        }
        return table(std::move(s), std::move(f));
    }
    throw ArgumentError("density '" + std::string(text) + "': unknown kind");
}

std::string Density::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind_) {
    case Kind::constant: out << "const:" << c0_; break;
    case Kind::power: out << "power:" << alpha_; break;
    case Kind::log_example: out << "log:" << gamma_; break;
    case Kind::table: out << "table:" << radii_.size() << " points"; break;
    }
    return out.str();
}

double Density::operator()(double s, int m) const {
    switch (kind_) {
    case Kind::constant: return c0_;
    case Kind::power: return std::pow(s, -alpha_);
    case Kind::log_example: return std::pow(s, -2.0 * m) * std::pow(1.0 - std::log(s), -gamma_);
    case Kind::table: {
        std::size_t i = static_cast<std::size_t>(std::upper_bound(radii_.begin(), radii_.end(), s) - radii_.begin());
        i = std::clamp<std::size_t>(i, 1, radii_.size() - 1) - 1;
        const double k = std::log(values_[i + 1] / values_[i]) / std::log(radii_[i + 1] / radii_[i]);
        return values_[i] * std::pow(s / radii_[i], k);
    }
    }
    return 0.0;
}

void RadialProblem::validate() const {
    if (n < 1 || m < 1 || m > n) throw ArgumentError("radial problem: need 1 <= m <= n");
    if (p && !(*p > static_cast<double>(n) / m)) throw DomainError("radial problem: p must exceed n/m");
    switch (density.kind()) {
    case Density::Kind::power:
        if (!(density.alpha() > 0.0) || !(density.alpha() < 2.0 * n))
            throw DomainError("power density: need 0 < alpha < 2n");
        break;
    case Density::Kind::log_example:
        if (!(density.gamma() > static_cast<double>(m) / n)) throw DomainError("log density: need gamma > m/n");
        break;
    case Density::Kind::table: {
        const auto head = power_head(*this);
        if (!(head->e > 0.0)) throw DomainError("table density: inner integral diverges at 0");
        break;
    }
    case Density::Kind::constant:
        break;
    }
}

double b_constant(int n, int m, Convention convention) {
    if (n < 1 || m < 1 || m > n) throw ArgumentError("b_constant: need 1 <= m <= n");
    if (convention == Convention::paper)
        return std::pow(core::binomial(n, m) / (std::pow(2.0, m + 1) * n), -1.0 / m);
    return 2.0 * std::pow(2.0 * n, 1.0 / m);
}

double inner_integral(const RadialProblem& pb, double t) {
    if (!(t >= 0.0)) throw ArgumentError("inner_integral: t must be >= 0");
    if (t == 0.0) return 0.0;
    const auto& d = pb.density;
    switch (d.kind()) {
    case Density::Kind::constant:
    case Density::Kind::power: {
        const auto head = power_head(pb);
        if (!(head->e > 0.0)) throw DomainError("inner integral diverges (alpha >= 2n)");
        return head->K * std::pow(t, head->e);
    }
    case Density::Kind::log_example: {
        const double s = -std::log(t);
        return std::pow(t, 2.0 * (pb.n - pb.m)) * log_j(pb.n, pb.m, d.gamma(), s);
    }
    case Density::Kind::table: {
        const auto head = power_head(pb);
        if (!(head->e > 0.0)) throw DomainError("table density: inner integral diverges at 0");
        const auto& s = d.radii();
        const auto& f = d.values();
        if (t <= s[0]) return head->K * std::pow(t, head->e);
        double total = head->K * std::pow(s[0], head->e);
        for (std::size_t i = 0; i + 1 < s.size() && s[i] < t; ++i) {
            const double k = std::log(f[i + 1] / f[i]) / std::log(s[i + 1] / s[i]);
            const double hi = (i + 2 == s.size()) ? t : std::min(t, s[i + 1]);
            total += power_piece(pb.n, f[i], s[i], k, s[i], hi);
        }
        return total;
    }
    }
    return 0.0;
}

RadialSolution radial_solve(const RadialProblem& pb, int grid, double tol) {
    pb.validate();
    if (grid < 2) throw ArgumentError("radial_solve: grid must be >= 2");
    if (!(tol > 0.0)) throw ArgumentError("radial_solve: tol must be positive");
    const double B = b_constant(pb.n, pb.m, pb.convention);
    const auto head = power_head(pb);
    const bool with_zero = u0_finite(pb);
    const std::size_t cells = static_cast<std::size_t>(grid);
    const double cell_tol = tol / (B * grid);

    // cell i spans [i/N, (i+1)/N]
    std::vector<double> piece(cells, 0.0), err(cells, 0.0);
    parallel_for(
        cells,
        [&](std::size_t i) {
            const double a = static_cast<double>(i) / grid;
            const double b = static_cast<double>(i + 1) / grid;
            if (i == 0) {
                if (!with_zero) return;
                // Analytic on [0, min(b, head limit)].
                const double cut = std::min(b, head->limit);
                piece[i] = head_outer(pb, *head, 0.0, cut);
                if (cut < b) {
                    const auto r = outer_cell(pb, cut, b, cell_tol);
                    piece[i] += r.value;
                    err[i] = r.error;
                }
                return;
            }
            quad::Result r;
            if (pb.density.kind() == Density::Kind::log_example)
                r = log_outer(pb, -std::log(b), -std::log(a), cell_tol);
            else
                r = outer_cell(pb, a, b, cell_tol);
            piece[i] = r.value;
            err[i] = r.error;
        },
        8);

    RadialSolution sol;
    sol.B_used = B;
    sol.quadrature_tol = tol;
    const std::size_t first = with_zero ? 0 : 1;
    sol.r.resize(cells + 1 - first);
    sol.U.resize(cells + 1 - first);
    double u = 0.0, e = 0.0;
    for (std::size_t i = cells + 1; i-- > first;) {
        if (i < cells) {
            u -= B * piece[i];
            e += B * err[i];
        }
        sol.r[i - first] = static_cast<double>(i) / grid;
        sol.U[i - first] = u;
    }
    sol.achieved_error = e;
    if (e > tol) throw QuadratureError("radial_solve: tolerance not met", e);
    return sol;
}

double radial_value(const RadialProblem& pb, double r, double tol) {
    pb.validate();
    if (!(r >= 0.0) || r > 1.0) throw ArgumentError("radial_value: r must lie in [0, 1]");
    const double B = b_constant(pb.n, pb.m, pb.convention);
    if (r == 1.0) return 0.0;
    if (pb.density.kind() == Density::Kind::log_example) {
        if (r == 0.0) throw DomainError("radial_value: r = 0 not supported for the log density");
        const auto res = log_outer(pb, 0.0, -std::log(r), tol / B);
        if (res.error * B > tol) throw QuadratureError("radial_value: tolerance not met", res.error * B);
        return -B * res.value;
    }
    double total = 0.0;
    double start = r;
    if (r == 0.0) {
        if (!u0_finite(pb)) return -std::numeric_limits<double>::infinity();
        const auto head = power_head(pb);
        start = std::min({head->limit, 1e-3, 1.0});
        total += head_outer(pb, *head, 0.0, start);
    }
    const auto res = outer_cell(pb, start, 1.0, tol / B);
    return -B * (total + res.value);
}

double power_closed_form(int n, int m, double alpha, double B, double r) {
    const double c = B * std::pow(2.0 * n - alpha, -1.0 / m) * m / (2.0 * m - alpha);
    return c * (std::pow(r, 2.0 - alpha / m) - 1.0);
}

ResidualReport radial_hessian_residual(const RadialSolution& sol, const RadialProblem& pb, double r_min) {
    const std::size_t size = sol.r.size();
    if (size < 200) throw ArgumentError("radial_hessian_residual: grid needs at least 200 points");
    const double h = sol.r[1] - sol.r[0];
    for (std::size_t i = 1; i < size; ++i)
        if (std::abs(sol.r[i] - sol.r[i - 1] - h) > 1e-9 * h)
            throw ArgumentError("radial_hessian_residual: grid must be uniform");
    const double binom = core::binomial(pb.n, pb.m);
    ResidualReport rep;
    double ratio_sum = 0.0;
    for (std::size_t i = 2; i + 2 < size; ++i) {
        const double r = sol.r[i];
        if (r < r_min) continue;
        const double* u = &sol.U[i];
        const double d1 = (u[-2] - 8.0 * u[-1] + 8.0 * u[1] - u[2]) / (12.0 * h);
        const double d2 = (-u[-2] + 16.0 * u[-1] - 30.0 * u[0] + 16.0 * u[1] - u[2]) / (12.0 * h * h);
        // dd^c U for U(|z|): tangential eigenvalue U'/(2r), radial U'/(4r) + U''/4.
        std::vector<double> lambda(static_cast<std::size_t>(pb.n), d1 / (2.0 * r));
        lambda.back() = d1 / (4.0 * r) + d2 / 4.0;
        const double s = core::elementary_symmetric(core::EigenVector(std::move(lambda)), pb.m) / binom;
        const double f = pb.density(r, pb.m);
        const double res = std::abs(s - f) / (1.0 + f);
        if (res > rep.max_residual || rep.points == 0) {
            rep.max_residual = res;
            rep.at_r = r;
        }
        ratio_sum += f > 0.0 ? s / f : 0.0;
        ++rep.points;
    }
    if (rep.points == 0) throw ArgumentError("radial_hessian_residual: no grid points above r_min");
    rep.mean_ratio = ratio_sum / static_cast<double>(rep.points);
    return rep;
}

double calibrate_convention(int n, int m) {
    if (n < 1 || m < 1 || m > n) throw ArgumentError("calibrate_convention: need 1 <= m <= n");
    RadialProblem pb;
    pb.n = n;
    pb.m = m;
    pb.density = Density::constant(1.0);
    // B = 1: evaluate by quadrature at a few radii and fit a in U = a (r^2 - 1).
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double r = 0.05 + 0.1 * k;
        const auto res = outer_cell(pb, r, 1.0, 1e-15);
        const double u = -res.value;
        const double x = r * r - 1.0;
        num += u * x;
        den += x * x;
    }
    return den / num;
}

modulus::ModulusCurve radial_modulus(const RadialSolution& sol) {
    const std::size_t size = sol.r.size();
    if (size < 3) throw ArgumentError("radial_modulus: grid too small");
    const double h = sol.r[1] - sol.r[0];
    std::vector<modulus::Knot> knots(size);
    knots[0] = {0.0, 0.0};
    std::vector<double> sup(size, 0.0);
    parallel_for(
        size - 1,
        [&](std::size_t km1) {
            const std::size_t k = km1 + 1;
            double best = 0.0;
            for (std::size_t i = 0; i + k < size; ++i) best = std::max(best, std::abs(sol.U[i + k] - sol.U[i]));
            sup[k] = best;
        },
        16);
    double running = 0.0;
    for (std::size_t k = 1; k < size; ++k) {
        running = std::max(running, sup[k]);
        knots[k] = {h * static_cast<double>(k), running};
    }
    return modulus::ModulusCurve(std::move(knots));
}

HolderCheck holder_exponent_check(const RadialProblem& pb, const RadialSolution& sol) {
    const auto curve = radial_modulus(sol);
    const double h = sol.r[1] - sol.r[0];
    HolderCheck out;
    out.fit = modulus::holder_fit(curve, {std::max(1e-4, h) * (1.0 - 1e-9), 1e-2 * (1.0 + 1e-9)});
    double alpha = 0.0;
    if (pb.density.kind() == Density::Kind::power) alpha = pb.density.alpha();
    out.expected = std::min(1.0, 2.0 - alpha / pb.m);
    out.pass = std::abs(out.fit.exponent - out.expected) <= 0.03;
    return out;
}

LogExampleReport log_example_check(double gamma, int n, int m, double tol) {
    RadialProblem pb;
    pb.n = n;
    pb.m = m;
    pb.density = Density::log_example(gamma);
    pb.convention = Convention::form;
    pb.validate();
    (void)log_j(n, m, gamma, 0.0); // surfaces divergence of the inner integral

    LogExampleReport rep;
    rep.n = n;
    rep.m = m;
    rep.gamma = gamma;

    // Decay of J^{1/m} in (1 + s); the s-integral converges iff it exceeds 1.
    const double s1 = 1e8, s2 = 2e8;
    const double g1 = std::pow(log_j(n, m, gamma, s1), 1.0 / m);
    const double g2 = std::pow(log_j(n, m, gamma, s2), 1.0 / m);
    rep.tail_exponent = -(std::log(g2) - std::log(g1)) / (std::log1p(s2) - std::log1p(s1));
    rep.bounded = rep.tail_exponent > 1.0 + 1e-3;

    for (int k = 1; k <= 8; ++k) rep.abs_u.push_back(std::abs(radial_value(pb, std::pow(10.0, -k), tol)));
    rep.abs_u_increasing = true;
    for (std::size_t i = 1; i < rep.abs_u.size(); ++i)
        if (!(rep.abs_u[i] > rep.abs_u[i - 1])) rep.abs_u_increasing = false;

    // h(r) = 1 - (1 - log r)^{1 - gamma/m}; at gamma = m the limiting profile
    // -log(1 - log r) is used.
    const double expo = 1.0 - gamma / m;
    auto profile = [&](double r) {
        const double x = 1.0 - std::log(r);
        if (std::abs(expo) < 1e-12) return -std::log(x);
        return 1.0 - std::pow(x, expo);
    };
    std::vector<double> us, hs;
    const int points = 60;
    for (int i = 0; i < points; ++i) {
        const double r = std::exp(std::log(1e-6) + (std::log(0.5) - std::log(1e-6)) * i / (points - 1));
        us.push_back(radial_value(pb, r, tol));
        hs.push_back(profile(r));
    }
    // U <= C h: for h < 0 this bounds C from above, for h > 0 from below.
    const bool negative = hs.front() < 0.0;
    double c = negative ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < us.size(); ++i) c = negative ? std::min(c, us[i] / hs[i]) : std::max(c, us[i] / hs[i]);
    rep.fitted_c = c;
    rep.bound_points = us.size();
    rep.bound_holds = std::isfinite(c) && (!negative || c > 0.0);
    for (std::size_t i = 0; i < us.size() && rep.bound_holds; ++i)
        if (us[i] > c * hs[i] + 1e-12 * (1.0 + std::abs(us[i]))) rep.bound_holds = false;
    return rep;
}

GammaExponent gamma_exponent(int n, int m, double p, double r) {
    if (n < 1 || m < 1 || m > n) throw ArgumentError("gamma_exponent: need 1 <= m <= n");
    if (!(r >= 1.0)) throw ArgumentError("gamma_exponent: need r >= 1");
    if (!(p > static_cast<double>(n) / m)) throw DomainError("gamma_exponent: need p > n/m");
    auto value = [&](double rr) {
        const double q = p / (p - 1.0);
        return rr / (rr + m * q + p * q * (n - m) / (p - static_cast<double>(n) / m));
    };
    GammaExponent g;
    g.q = p / (p - 1.0);
    g.gamma_r = value(r);
    g.gamma_1 = value(1.0);
    g.alpha_bound_1 = g.gamma_1;
    g.alpha_bound_2 = std::min(0.5, 2.0 * g.gamma_1);
    return g;
}

LpModulusFit lp_modulus_fit(const RadialProblem& pb, const RadialSolution& sol, double p) {
    const double lo = static_cast<double>(pb.n) / pb.m;
    if (!(p > lo) || !(p < 2.0 * lo)) throw DomainError("lp_modulus_fit: need n/m < p < 2n/m");
    const double sphere = 2.0 * std::pow(std::numbers::pi, pb.n) / std::tgamma(pb.n);
    double integral = 0.0;
    switch (pb.density.kind()) {
    case Density::Kind::constant:
        integral = std::pow(pb.density.c0(), p) / (2.0 * pb.n);
        break;
    case Density::Kind::power: {
        const double e = 2.0 * pb.n - pb.density.alpha() * p;
        if (!(e > 0.0)) throw DomainError("lp_modulus_fit: f is not in L^p");
        integral = 1.0 / e;
        break;
    }
    default: {
        // Dyadic pieces down to 2^-40; the remainder is not counted.
        quad::Options opt;
        opt.abs_tol = 1e-12;
        for (int k = 0; k < 40; ++k) {
            const double b = std::ldexp(1.0, -k), a = std::ldexp(1.0, -k - 1);
            integral += quad::integrate(
                            [&](double s) { return std::pow(s, 2.0 * pb.n - 1) * std::pow(pb.density(s, pb.m), p); }, a, b,
                            opt)
                            .value;
        }
    }
    }
    LpModulusFit fit;
    fit.p = p;
    fit.exponent = 2.0 - 2.0 * pb.n / (pb.m * p);
    fit.lp_norm = std::pow(sphere * integral, 1.0 / p);
    const double scale = std::pow(fit.lp_norm, 1.0 / pb.m);
    const std::size_t size = sol.r.size();
    std::vector<double> rb(size);
    for (std::size_t i = 0; i < size; ++i) rb[i] = std::pow(sol.r[i], fit.exponent);
    std::vector<double> best(size, 0.0);
    parallel_for(
        size,
        [&](std::size_t i) {
            for (std::size_t j = i + 1; j < size; ++j) {
                const double gap = scale * (rb[j] - rb[i]);
                if (gap > 0.0) best[i] = std::max(best[i], std::abs(sol.U[j] - sol.U[i]) / gap);
            }
        },
        16);
    fit.constant = *std::max_element(best.begin(), best.end());
    fit.pairs = size * (size - 1) / 2;
    return fit;
}

void write_csv(const RadialSolution& sol, std::ostream& out) {
    out << "r,U\n";
    char buf[64];
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", sol.r[i], sol.U[i]);
        out << buf;
    }
}

std::string to_json(const RadialSolution& sol, const RadialProblem& pb) {
    nlohmann::ordered_json j;
    j["problem"] = {{"n", pb.n},
                    {"m", pb.m},
                    {"density", pb.density.describe()},
                    {"convention", to_string(pb.convention)}};
    if (pb.p) j["problem"]["p"] = *pb.p;
    j["B_used"] = sol.B_used;
    j["quadrature_tol"] = sol.quadrature_tol;
    j["achieved_error"] = sol.achieved_error;
    j["r"] = sol.r;
    j["U"] = sol.U;
    return j.dump(2);
}

} // namespace cxhess::radial
