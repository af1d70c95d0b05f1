#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "cxhess/barrier.hpp"
#include "cxhess/errors.hpp"
#include "cxhess/geometry.hpp"
#include "cxhess/hessian_core.hpp"
#include "cxhess/modulus.hpp"
#include "cxhess/parallel.hpp"
#include "cxhess/radial.hpp"
#include "cxhess/version.hpp"
#include "verify.hpp"

namespace cxhess::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 42;
    std::optional<double> tol;
    std::string output_dir;
    std::string format;
    unsigned threads = 0;
    std::string config;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_option("--tol", c.tol, "Tolerance (default depends on the command)");
    sub->add_option("--output-dir", c.output_dir, "Write report files here instead of stdout");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--threads", c.threads, "Cap on worker threads (0 = all cores)");
    sub->add_option("--config", c.config, "key = value file; flags take precedence");
}

std::string join(const std::vector<std::string>& args) {
    std::string s = "cxhess";
    for (const auto& a : args) s += " " + a;
    return s;
}

Json meta(const std::vector<std::string>& args, const Common& c, Json tolerances) {
    Json j;
    j["command"] = join(args);
    j["version"] = version;
    j["seed"] = c.seed;
    j["tolerances"] = std::move(tolerances);
    return j;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
        if (ec != std::errc() || ptr != piece.data() + piece.size() || piece.empty())
            throw UsageError("bad number '" + piece + "' in list");
        out.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// Reads "key = value" lines into flag tokens.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::vector<std::string> tokens;
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "config") continue;
        tokens.push_back("--" + key);
        tokens.push_back(value);
    }
    return tokens;
}

// Config entries go right after the subcommand so later flags override them.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (!path || args.empty()) return args;
    auto tokens = config_tokens(*path);
    std::vector<std::string> out{args[0]};
    out.insert(out.end(), tokens.begin(), tokens.end());
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

class Emitter {
public:
    Emitter(const Common& c, std::ostream& out) : c_(c), out_(out) {}

    // Writes `body` to dir/name, or to stdout when no directory is set.
    void emit(const std::string& name, const std::string& body, bool primary) {
        if (c_.output_dir.empty()) {
            if (primary) out_ << body;
            return;
        }
        std::filesystem::create_directories(c_.output_dir);
        const auto path = std::filesystem::path(c_.output_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path.string());
        f << body;
        written_.push_back(path.string());
    }

    void finish() {
        if (c_.output_dir.empty()) return;
        Json j;
        j["written"] = written_;
        out_ << j.dump(2) << "\n";
    }

private:
    const Common& c_;
    std::ostream& out_;
    std::vector<std::string> written_;
};

std::string modulus_csv(const modulus::ModulusCurve& curve) {
    std::ostringstream s;
    modulus::write_csv(curve, s);
    return s.str();
}

// Points file: rows of coordinates followed by the value; a non-numeric first
// row is a header.
void read_points(const std::string& path, std::vector<Eigen::VectorXd>& pts, std::vector<double>& vals) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        try {
            row = parse_list(line);
        } catch (const UsageError&) {
            if (first) {
                first = false;
                continue;
            }
            throw ArgumentError("points file: bad row '" + line + "'");
        }
        first = false;
        if (row.size() < 2) throw ArgumentError("points file: need coordinates and a value");
        Eigen::VectorXd x(static_cast<Eigen::Index>(row.size() - 1));
        for (std::size_t i = 0; i + 1 < row.size(); ++i) x(static_cast<Eigen::Index>(i)) = row[i];
        pts.push_back(std::move(x));
        vals.push_back(row.back());
    }
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical toolkit for complex Hessian equations", "cxhess"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Common common;

    // cone
    auto* cone = app.add_subcommand("cone", "Cone membership and H_k values of an eigenvalue vector");
    std::string lambda_text;
    int cone_m = 1;
    cone->add_option("--lambda", lambda_text, "Comma-separated eigenvalues")->required();
    cone->add_option("--m", cone_m, "Order m")->required();

    // garding
    auto* garding = app.add_subcommand("garding", "Garding inequality on random Gamma_m tuples");
    int g_n = 2, g_m = 1;
    std::size_t g_samples = 1000;
    garding->add_option("--n", g_n)->required();
    garding->add_option("--m", g_m)->required();
    garding->add_option("--samples", g_samples)->capture_default_str();

    // modulus
    auto* mod = app.add_subcommand("modulus", "Empirical modulus of continuity and its concave majorant");
    std::string mod_input;
    int mod_bins = 200;
    std::optional<double> mod_tmax;
    mod->add_option("--input", mod_input, "CSV rows: coordinates..., value")->required();
    mod->add_option("--bins", mod_bins)->capture_default_str();
    mod->add_option("--t-max", mod_tmax, "Largest distance (default: bounding-box diagonal)");

    // barrier
    auto* bar = app.add_subcommand("barrier", "Barrier sub/supersolutions and the modulus bound");
    std::string b_domain = "ball:1", b_phi = "re_z1", b_f = "zero", b_omega = "exact";
    int b_n = 2, b_m = 2;
    std::size_t b_xi = 500, b_grid = 20000, b_probe = 1000;
    int b_bins = 200;
    std::optional<double> b_ceiling;
    bar->add_option("--domain", b_domain)->capture_default_str();
    bar->add_option("--n", b_n)->capture_default_str();
    bar->add_option("--m", b_m)->capture_default_str();
    bar->add_option("--phi", b_phi, "re_z1 | psi_sqrt | const:c")->capture_default_str();
    bar->add_option("--f", b_f, "zero | const:c")->capture_default_str();
    bar->add_option("--xi-samples", b_xi)->capture_default_str();
    bar->add_option("--grid", b_grid)->capture_default_str();
    bar->add_option("--bins", b_bins)->capture_default_str();
    bar->add_option("--probe", b_probe, "Points for the finite-difference m-subharmonicity probe")->capture_default_str();
    bar->add_option("--omega", b_omega, "exact | estimated")->check(CLI::IsMember({"exact", "estimated"}));
    bar->add_option("--ceiling", b_ceiling, "Ceiling for eta (default from the barrier parameters)");

    // radial
    auto* rad = app.add_subcommand("radial", "Radial solution on the unit ball");
    int r_n = 2, r_m = 1, r_grid = 2000;
    std::string r_density = "const:1", r_convention = "form";
    std::optional<double> r_p;
    double r_rmin = 0.05;
    rad->add_option("--n", r_n)->capture_default_str();
    rad->add_option("--m", r_m)->capture_default_str();
    rad->add_option("--density", r_density, "const:c | power:a | log:g | table:path")->capture_default_str();
    rad->add_option("--convention", r_convention)->check(CLI::IsMember({"paper", "form"}))->capture_default_str();
    rad->add_option("--grid", r_grid)->capture_default_str();
    rad->add_option("--p", r_p, "Integrability exponent (metadata)");
    rad->add_option("--r-min", r_rmin, "Smallest radius in the residual check")->capture_default_str();

    // gamma
    auto* gam = app.add_subcommand("gamma", "Exponent gamma_r");
    int y_n = 2, y_m = 1;
    double y_p = 2.0, y_r = 1.0;
    gam->add_option("--n", y_n)->required();
    gam->add_option("--m", y_m)->required();
    gam->add_option("--p", y_p)->required();
    gam->add_option("--r", y_r)->capture_default_str();

    // verify
    auto* ver = app.add_subcommand("verify", "Run verification suites");
    std::string suite = "all";
    ver->add_option("--suite", suite)->check(CLI::IsMember({"all", "core", "modulus", "barrier", "radial"}))->capture_default_str();

    for (auto* sub : {cone, garding, mod, bar, rad, gam, ver}) add_common(sub, common);

    std::vector<std::string> args;
    try {
        args = expand_config(raw_args);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    set_max_threads(common.threads);
    Emitter emit(common, out);
    try {
        if (cone->parsed()) {
            const core::EigenVector lambda(parse_list(lambda_text));
            if (cone_m < 1 || cone_m > lambda.size()) throw ArgumentError("--m must lie in [1, n]");
            const double tol = common.tol.value_or(core::cone_tolerance(lambda, cone_m));
            const auto rep = core::gamma_m_contains(lambda, cone_m, tol);
            Json j;
            j["meta"] = meta(raw_args, common, {{"cone", tol}});
            j["lambda"] = std::vector<double>(lambda.values().begin(), lambda.values().end());
            j["m"] = cone_m;
            j["h_values"] = rep.h_values;
            j["member"] = rep.member;
            j["margin"] = rep.margin;
            if (rep.member) {
                try {
                    j["maclaurin"] = core::maclaurin_check(lambda, cone_m);
                } catch (const DomainError&) {
                    j["maclaurin"] = nullptr;
                }
            }
            emit.emit("cone.json", j.dump(2) + "\n", true);
            emit.finish();
            return 0;
        }
        if (garding->parsed()) {
            if (g_m < 1 || g_m > g_n) throw ArgumentError("--m must lie in [1, n]");
            const double tol = common.tol.value_or(1e-10);
            double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
            std::size_t bad = 0;
            for (std::size_t s = 0; s < g_samples; ++s) {
                SplitMix64 rng = substream(common.seed, s, 0x6a);
                std::vector<core::HermitianForm> forms;
                for (int k = 0; k < g_m; ++k) forms.push_back(core::random_gamma_form(g_n, g_m, rng));
                const auto r = core::garding_check(forms, tol);
                lo = std::min(lo, r.margin);
                hi = std::max(hi, r.margin);
                sum += r.margin;
                if (!r.holds) ++bad;
            }
            Json j;
            j["meta"] = meta(raw_args, common, {{"margin", tol}});
            j["n"] = g_n;
            j["m"] = g_m;
            j["samples"] = g_samples;
            j["min_margin"] = g_samples ? lo : 0.0;
            j["max_margin"] = g_samples ? hi : 0.0;
            j["mean_margin"] = g_samples ? sum / static_cast<double>(g_samples) : 0.0;
            j["violations"] = bad;
            j["pass"] = bad == 0;
            emit.emit("garding.json", j.dump(2) + "\n", true);
            emit.finish();
            return bad == 0 ? 0 : 1;
        }
        if (mod->parsed()) {
            std::vector<Eigen::VectorXd> pts;
            std::vector<double> vals;
            read_points(mod_input, pts, vals);
            modulus::EstimateOptions opt;
            opt.bins = mod_bins;
            opt.t_max = mod_tmax;
            opt.seed = common.seed;
            const auto curve = modulus::estimate_modulus(pts, vals, opt);
            const auto maj = modulus::concave_majorant(curve);
            const std::string format = common.format.empty() ? "csv" : common.format;
            Json j;
            j["meta"] = meta(raw_args, common, Json::object());
            j["points"] = pts.size();
            j["bins"] = mod_bins;
            j["t_max"] = curve.length();
            if (!common.output_dir.empty()) {
                emit.emit("modulus.csv", modulus_csv(curve), false);
                emit.emit("majorant.csv", modulus_csv(maj), false);
                emit.emit("modulus.json", j.dump(2) + "\n", false);
            } else if (format == "csv") {
                out << "t,w,majorant\n";
                char buf[96];
                for (std::size_t i = 0; i < curve.knots().size(); ++i) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", curve.knots()[i].t, curve.knots()[i].w,
                                  maj.knots()[i].w);
                    out << buf;
                }
            } else {
                j["curve"] = Json::parse(modulus::to_json(curve));
                j["majorant"] = Json::parse(modulus::to_json(maj));
                out << j.dump(2) << "\n";
            }
            emit.finish();
            return 0;
        }
        if (bar->parsed()) {
            const auto domain = geometry::Domain::parse(b_domain, b_n);
            if (b_m < 1 || b_m > b_n) throw ArgumentError("--m must lie in [1, n]");
            auto data = barrier::named_boundary_data(b_phi, domain);
            if (b_omega == "estimated")
                data = barrier::estimated_boundary_data(b_phi, data.phi, domain, 5000, 400, common.seed);
            const auto src = barrier::parse_source(b_f);
            const double tol = common.tol.value_or(1e-8);

            const auto v = barrier::build_subsolution(data, src, domain, b_m, b_xi, common.seed);
            const auto vt = barrier::build_supersolution(data, src, domain, b_m, b_xi, common.seed);
            auto anchors = v.xi();
            anchors.resize(std::min<std::size_t>(32, anchors.size()));
            const auto grid = geometry::evaluation_grid(domain, b_grid, anchors, common.seed);
            const auto lo = v.evaluate_all(grid.points);
            const auto hi = vt.evaluate_all(grid.points);
            const auto params = v.params();
            const double ceiling = b_ceiling.value_or(barrier::default_ceiling(params));
            const auto rep = barrier::verify_modulus_bound(grid.points, lo, data, src.sup, b_m, domain.diameter(), b_bins, ceiling);
            const auto rep_t = barrier::verify_modulus_bound(grid.points, hi, data, src.sup, b_m, domain.diameter(), b_bins,
                                                             barrier::default_ceiling(vt.params()));

            double at_xi = 0.0;
            for (const auto& x : v.xi()) at_xi = std::max({at_xi, std::abs(v(x) - data.phi(x)), std::abs(vt(x) - data.phi(x))});
            const auto checks = geometry::sample_boundary(domain, 2000, common.seed ^ 0x5eedULL);
            double gap = 0.0, above = -std::numeric_limits<double>::infinity();
            for (const auto& z : checks) {
                gap = std::max({gap, data.phi(z) - v(z), vt(z) - data.phi(z)});
                above = std::max(above, v(z) - data.phi(z));
            }

            Json j;
            j["meta"] = meta(raw_args, common, {{"sandwich", tol}, {"boundary", 1e-9}, {"probe", 1e-6}});
            j["domain"] = domain.describe();
            j["n"] = b_n;
            j["m"] = b_m;
            j["phi"] = b_phi;
            j["f"] = b_f;
            j["omega"] = b_omega;
            j["params"] = Json::parse(barrier::params_json(params));
            j["eta_fitted"] = rep.eta_fitted;
            j["lambda_bound"] = rep.lambda_bound;
            j["ceiling"] = ceiling;
            j["violations"] = rep.violations;
            j["supersolution"] = {{"eta_fitted", rep_t.eta_fitted}, {"violations", rep_t.violations}};
            j["sample_counts"] = {{"xi", v.xi().size()},
                                  {"grid", grid.points.size()},
                                  {"ray_points", grid.ray_points},
                                  {"cloud_points", grid.cloud_points},
                                  {"boundary_checks", checks.size()}};
            j["seed"] = common.seed;
            j["boundary_error_at_xi"] = at_xi;
            j["boundary_gap"] = gap;
            j["max_v_minus_phi_on_boundary"] = above;
            bool pass = rep.pass && rep_t.pass && at_xi <= 1e-9 && above <= 1e-9;
            if (const auto exact = barrier::exact_solution(b_phi, b_f, domain, b_m)) {
                double below = -std::numeric_limits<double>::infinity(), over = below;
                std::vector<double> u(grid.points.size());
                for (std::size_t i = 0; i < grid.points.size(); ++i) {
                    u[i] = (*exact)(grid.points[i]);
                    below = std::max(below, lo[i] - u[i]);
                    over = std::max(over, u[i] - hi[i]);
                }
                j["sandwich"] = {{"max_v_minus_U", below}, {"max_U_minus_vtilde", over}};
                pass = pass && below <= tol && over <= tol;
                try {
                    const auto fit = barrier::local_holder_fit(grid.points, u, domain.diameter());
                    j["holder_U"] = {{"exponent", fit.exponent}, {"constant", fit.constant}};
                } catch (const ArgumentError&) {
                    j["holder_U"] = nullptr;   // flat near 0
                }
            }
            try {
                const auto fit = barrier::local_holder_fit(grid.points, lo, domain.diameter());
                j["holder_v"] = {{"exponent", fit.exponent}, {"constant", fit.constant}};
            } catch (const ArgumentError&) {
                j["holder_v"] = nullptr;
            }
            if (b_probe > 0) {
                const auto probe = barrier::probe_subharmonic(v, b_probe, common.seed);
                j["probe"] = {{"probed", probe.probed},
                              {"smooth", probe.smooth},
                              {"min_cone_margin", probe.min_cone_margin},
                              {"min_l_alpha_gap", probe.min_l_alpha_gap},
                              {"pass", probe.pass}};
                pass = pass && probe.pass;
            }
            j["pass"] = pass;
            emit.emit("barrier.json", j.dump(2) + "\n", true);
            emit.finish();
            return pass ? 0 : 1;
        }
        if (rad->parsed()) {
            radial::RadialProblem pb;
            pb.n = r_n;
            pb.m = r_m;
            pb.density = radial::Density::parse(r_density);
            pb.convention = radial::parse_convention(r_convention);
            pb.p = r_p;
            const double tol = common.tol.value_or(1e-10);
            const auto sol = radial::radial_solve(pb, r_grid, tol);
            Json report = Json::parse(radial::to_json(sol, pb));
            Json j;
            j["meta"] = meta(raw_args, common, {{"quadrature", tol}});
            for (auto it = report.begin(); it != report.end(); ++it) j[it.key()] = it.value();
            if (sol.r.size() >= 200) {
                const auto res = radial::radial_hessian_residual(sol, pb, r_rmin);
                j["residual"] = {{"max", res.max_residual}, {"at_r", res.at_r}, {"mean_ratio", res.mean_ratio}, {"points", res.points}, {"r_min", r_rmin}};
            } else {
                j["residual"] = nullptr;
            }
            if (pb.density.kind() == radial::Density::Kind::power || pb.density.kind() == radial::Density::Kind::constant) {
                try {
                    const auto h = radial::holder_exponent_check(pb, sol);
                    j["holder"] = {{"exponent", h.fit.exponent}, {"expected", h.expected}, {"pass", h.pass}};
                } catch (const ArgumentError&) {
                    j["holder"] = nullptr;   // grid too coarse for the fit window
                }
            }
            std::ostringstream csv;
            radial::write_csv(sol, csv);
            const std::string format = common.format.empty() ? "csv" : common.format;
            if (!common.output_dir.empty()) {
                emit.emit("radial.csv", csv.str(), false);
                emit.emit("radial.json", j.dump(2) + "\n", false);
            } else if (format == "csv") {
                out << csv.str();
            } else {
                out << j.dump(2) << "\n";
            }
            emit.finish();
            return 0;
        }
        if (gam->parsed()) {
            const auto g = radial::gamma_exponent(y_n, y_m, y_p, y_r);
            Json j;
            j["meta"] = meta(raw_args, common, Json::object());
            j["n"] = y_n;
            j["m"] = y_m;
            j["p"] = y_p;
            j["r"] = y_r;
            j["q"] = g.q;
            j["gamma_r"] = g.gamma_r;
            j["gamma_1"] = g.gamma_1;
            j["alpha_bound_1"] = g.alpha_bound_1;
            j["alpha_bound_2"] = g.alpha_bound_2;
            emit.emit("gamma.json", j.dump(2) + "\n", true);
            emit.finish();
            return 0;
        }
        if (ver->parsed()) {
            std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
            Json j;
            j["meta"] = meta(raw_args, common, Json::object());
            Json suites;
            bool pass = true;
            for (const auto& name : names) {
                auto r = run_suite(name, common.seed);
                pass = pass && r["pass"].get<bool>();
                suites[name] = std::move(r);
            }
            j["suites"] = std::move(suites);
            j["pass"] = pass;
            emit.emit("verify.json", j.dump(2) + "\n", true);
            emit.finish();
            return pass ? 0 : 1;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << app.help();
    return 2;
}

} // namespace cxhess::cli
