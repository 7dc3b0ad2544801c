#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "config.hpp"
#include "rgfp/errors.hpp"
#include "rgfp/io.hpp"
#include "rgfp/parallel.hpp"
#include "rgfp/perturb.hpp"
#include "rgfp/propagator.hpp"
#include "rgfp/response.hpp"
#include "rgfp/trees.hpp"
#include "rgfp/trimming.hpp"

namespace rgfp::cli {

namespace {

using json = nlohmann::ordered_json;

struct Context {
    RunConfig cfg;
    ModelParams params;
    cutoff::CutoffProfile profile;
    int json_digits = 12;
    int csv_digits = 9;
    bool stream = false;
    std::string format;
    std::ostringstream body;

    double num(double v) const { return round_sig(v, json_digits); }
    json arr(const std::vector<double>& v) const {
        json a = json::array();
        for (double x : v) a.push_back(num(x));
        return a;
    }
    void emit(const json& j) { body << j.dump() << "\n"; }
};

std::vector<double> x_grid(const Context& c) {
    return log_grid(c.cfg.get_double("windows.x_min"), c.cfg.get_double("windows.x_max"),
                    static_cast<int>(c.cfg.get_long("quadrature.grid_density")));
}

prop::EvalOptions eval_options(const Context& c) {
    prop::EvalOptions o;
    o.rel_tol = c.cfg.get_double("quadrature.tol");
    o.max_panels = static_cast<int>(c.cfg.get_long("quadrature.max_panels"));
    return o;
}

std::optional<std::pair<long, long>> h_window(const Context& c) {
    if (c.cfg.get("windows.h_min") == "auto") return std::nullopt;
    return std::make_pair(c.cfg.get_long("windows.h_min"), c.cfg.get_long("windows.h_max"));
}

response::ScaleSumSpec sum_spec(const Context& c) {
    if (auto w = h_window(c)) return response::ScaleSumSpec::fixed(w->first, w->second);
    return {};
}

void require_format(const Context& c, const char* cmd, bool csv_ok, bool json_ok) {
    if ((c.format == "csv" && !csv_ok) || (c.format == "json" && !json_ok))
        throw ConfigError(std::string(cmd) + " does not support output.format = " + c.format);
}

void cmd_exponents(Context& c) {
    require_format(c, "exponents", false, true);
    const auto sol = perturb::solve_eta2_detailed(c.params, c.profile);
    c.body << perturb::exponents_json(sol.exps, c.params, c.profile, c.json_digits) << "\n";
}

void cmd_propagator(Context& c) {
    const prop::ScaleBand band = prop::ScaleBand::parse(c.cfg.get("windows.band"));
    const auto xs = x_grid(c);
    const auto eo = eval_options(c);
    const auto vs = parallel_map(xs.size(), [&](size_t i) { return prop::eval(band, c.params, c.profile, xs[i], eo); });
    if (c.format == "json") {
        if (c.stream) {
            for (size_t i = 0; i < xs.size(); ++i) c.emit(json{{"band", band.str()}, {"r", c.num(xs[i])}, {"value", c.num(vs[i])}});
        } else {
            c.emit(json{{"band", band.str()}, {"r", c.arr(xs)}, {"value", c.arr(vs)}});
        }
        return;
    }
    RadialSamples s;
    s.radii = xs;
    s.values = vs;
    std::ostringstream e, g;
    e << c.params.eps;
    g << c.params.gamma;
    s.meta = {{"d", std::to_string(c.params.d)}, {"eps", e.str()}, {"gamma", g.str()}, {"scale", band.str()},
              {"profile", c.profile.id()}};
    write_csv(c.body, s, c.csv_digits);
}

void cmd_response(Context& c) {
    const std::string kind = c.cfg.get("windows.response");
    const auto xs = x_grid(c);
    const ModelParams& p = c.params;
    const Exponents exps = (kind == "G" || kind == "F") ? perturb::solve_eta2(p, c.profile) : free_exponents(p);
    const auto spec = sum_spec(c);
    const double C0 = prop::riesz_constant(p.d, p.alpha());
    std::function<double(double)> value, reference;
    if (kind == "G") {
        value = [&](double x) { return response::scale_sum_G(p, c.profile, exps, x, spec); };
        reference = [&](double x) { return C0 * std::pow(x, -2.0 * exps.delta1); };
    } else if (kind == "F") {
        value = [&](double x) { return response::scale_sum_F(p, c.profile, exps, x, spec); };
        reference = [&](double x) { return response::F_leading(p, exps, x); };
    } else if (kind == "freeG") {
        value = [&](double x) { return response::free_G(p, c.profile, x); };
        reference = [&](double x) { return C0 * std::pow(x, p.alpha() - p.d); };
    } else if (kind == "freeF") {
        value = [&](double x) { return response::free_F(p, c.profile, x); };
        reference = [&](double x) { return -2.0 * p.N * std::pow(C0 * std::pow(x, p.alpha() - p.d), 2); };
    } else if (kind == "E1") {
        value = [&](double x) { return response::correction_E1_free(p, c.profile, x); };
        reference = [](double) { return 0.0; };
    } else if (kind == "E2") {
        value = [&](double x) { return response::correction_E2_free(p, c.profile, x); };
        reference = [](double) { return 0.0; };
    } else {
        throw ConfigError("windows.response must be G, F, freeG, freeF, E1 or E2");
    }
    const auto vs = parallel_map(xs.size(), [&](size_t i) { return value(xs[i]); });
    std::vector<std::vector<double>> rows;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double r = reference(xs[i]);
        rows.push_back({xs[i], vs[i], r, vs[i] - r});
    }
    if (c.format == "json") {
        for (const auto& row : rows)
            c.emit(json{{"response", kind}, {"x", c.num(row[0])}, {"value", c.num(row[1])},
                        {"fit_powerlaw", c.num(row[2])}, {"residual", c.num(row[3])}});
        return;
    }
    write_csv(c.body, {"x", "value", "fit_powerlaw", "residual"}, rows, c.csv_digits);
}

void cmd_scale_check(Context& c) {
    require_format(c, "scale-check", false, true);
    const ModelParams& p = c.params;
    const Exponents exps = perturb::solve_eta2(p, c.profile);
    const double g = p.gamma;
    const double x0 = c.cfg.get_double("windows.x_min");
    const auto xs = x_grid(c);
    const double C0 = prop::riesz_constant(p.d, p.alpha());

    const auto G = parallel_map(xs.size(), [&](size_t i) { return response::scale_sum_G(p, c.profile, exps, xs[i]); });
    double worst = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double ref = C0 * std::pow(xs[i], -2.0 * exps.delta1);
        worst = std::max(worst, std::fabs(G[i] - ref) / std::fabs(ref));
    }

    const auto w = response::auto_window(p, c.profile, x0);
    const double a = response::scale_sum_G(p, c.profile, exps, g * x0, response::ScaleSumSpec::fixed(w.h_min, w.h_max, false));
    const double b = response::scale_sum_G(p, c.profile, exps, x0, response::ScaleSumSpec::fixed(w.h_min + 1, w.h_max + 1, false));
    const double identity = std::fabs(a - std::pow(g, -2.0 * exps.delta1) * b) / std::fabs(a);

    const double free_cov =
        std::fabs(response::free_G(p, c.profile, g * x0) / response::free_G(p, c.profile, x0) * std::pow(g, 2.0 * p.psi_dim()) - 1.0);

    const auto ys = log_grid(x0, 10.0 * x0, 16);
    const auto F = parallel_map(ys.size(), [&](size_t i) { return response::scale_sum_F(p, c.profile, exps, ys[i]); });
    const double slope = response::loglog_slope(ys, F);

    std::vector<long> hs;
    if (auto hw = h_window(c)) {
        for (long h = hw->first; h <= hw->second; ++h) hs.push_back(h);
    } else {
        for (long h = -20; h <= 4; ++h) hs.push_back(h);
    }
    const auto tail = response::tail_profile(p, c.profile, exps, x0, hs);

    json j;
    j["G_max_rel_deviation"] = c.num(worst);
    j["reindex_identity_residual"] = c.num(identity);
    j["free_G_covariance_residual"] = c.num(free_cov);
    j["F_slope"] = c.num(slope);
    j["F_slope_expected"] = c.num(-2.0 * exps.delta2);
    j["tail_slope"] = c.num(tail.slope);
    j["tail_slope_expected"] = c.num(tail.expected_slope);
    j["tail_points"] = tail.slope_points;
    j["x_min"] = x0;
    j["x_max"] = c.cfg.get_double("windows.x_max");
    c.emit(j);
}

KernelLabel parse_label(const std::string& text) {
    std::vector<int> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ConfigError("bad kernel label '" + text + "'");
        }
    }
    if (v.size() < 3) throw ConfigError("kernel label needs n,m,l[,p...]");
    KernelLabel l = KernelLabel::make(v[0], v[1], v[2], std::vector<int>(v.begin() + 3, v.end()));
    if (!l.valid()) throw ConfigError("invalid kernel label '" + text + "'");
    return l;
}

void cmd_trees(Context& c) {
    require_format(c, "trees", false, true);
    const ModelParams& p = c.params;
    const int kmax = static_cast<int>(c.cfg.get_long("windows.max_endpoints"));
    const std::string cons = c.cfg.get("windows.constraint");
    trees::TypeConstraint tc;
    if (cons == "two-phi") tc.phi_sources = 2;
    if (cons == "two-J") tc.j_sources = 2;
    const KernelLabel root = parse_label(c.cfg.get("windows.root_label"));
    const trees::EndpointType et = trees::parse_endpoint_type(c.cfg.get("windows.endpoint_type"));
    const KernelLabel el = trees::endpoint_label(et);
    if (c.stream && (root.n != el.n * kmax || root.m != el.m * kmax))
        throw ConfigError("root_label " + root.str() + " does not match " + std::to_string(kmax) + " endpoints of type " +
                          trees::to_string(et));

    const Exponents exps = perturb::solve_eta2(p, c.profile);
    const trees::BoundConstants k = trees::compute_constants(p, c.profile, exps);
    for (int n = 1; n <= kmax; ++n) {
        json j;
        j["endpoints"] = n;
        j["shapes"] = trees::count_shapes(n);
        j["four_to_k"] = static_cast<std::uint64_t>(std::pow(4.0, n));
        if (n <= 8) {
            std::uint64_t typed = 0;
            trees::for_each_shape(n, [&](const trees::ExpansionTree& t) { typed += trees::count_typed(t, tc); });
            j["typed"] = typed;
        }
        j["constraint"] = cons;
        c.emit(j);
    }
    json kj;
    kj["C_chi1"] = c.num(k.C_chi1);
    kj["C_chi2"] = c.num(k.C_chi2);
    kj["M_w_norm"] = c.num(k.M_w_norm);
    kj["C_gamma"] = c.num(k.C_gamma);
    kj["C0"] = c.num(k.C0);
    kj["C_R"] = c.num(k.C_R);
    kj["d_gamma"] = c.num(k.d_gamma);
    kj["min_abs_D_sc"] = c.num(k.min_abs_dsc);
    kj["min_label"] = k.min_label;
    kj["min_matches_reference"] = k.min_matches_reference;
    if (k.alpha_infinite)
        kj["alpha_gamma"] = "inf";
    else
        kj["alpha_gamma"] = c.num(k.alpha_gamma);
    kj["K"] = c.num(k.K);
    kj["K_prime"] = c.num(k.K_prime);
    kj["eps0"] = c.num(trees::radius_estimate(k, p));
    c.emit(kj);
    if (c.stream) {
        trees::for_each_shape(kmax, [&](const trees::ExpansionTree& t) {
            trees::ExpansionTree typed = t;
            typed.types.assign(kmax, et);
            c.body << trees::tree_json(typed, trees::tree_bound(typed, root, k, p, exps), c.json_digits) << "\n";
        });
    }
}

void cmd_decay_fit(Context& c) {
    require_format(c, "decay-fit", false, true);
    const prop::Window w{c.cfg.get_double("windows.fit_lo"), c.cfg.get_double("windows.fit_hi")};
    const std::string target = c.cfg.get("windows.fit_target");
    prop::DecayFit f;
    std::string what;
    if (target == "E1") {
        f = response::decay_fit_E1(c.params, c.profile, w);
        what = "E1";
    } else {
        const prop::ScaleBand band = prop::ScaleBand::parse(c.cfg.get("windows.band"));
        f = prop::decay_fit(band, c.params, c.profile, w);
        what = band.str();
    }
    json j;
    j["target"] = what;
    j["C"] = c.num(f.C);
    j["C_ls"] = c.num(f.C_ls);
    j["c"] = c.num(f.c);
    j["sigma_fit"] = c.num(f.sigma_fit);
    j["sigma_expected"] = c.num(c.params.sigma());
    j["residual"] = c.num(f.residual);
    j["window"] = json::array({w.lo, w.hi});
    j["n_points"] = f.n_points;
    j["n_samples"] = f.n_samples;
    c.emit(j);
}

void cmd_trim_check(Context& c) {
    require_format(c, "trim-check", false, true);
    const auto f1 = trim::standard_fields_101();
    const auto f2 = trim::standard_fields_012();
    std::vector<json> rows;
    double worst = 0.0;
    bool bounds = true;
    for (const auto& k : trim::battery_101()) {
        const auto s = trim::split_101(k, f1.phi, f1.psi, f1.dpsi, f1.radius);
        const double norm = trim::norm_101(trim::interpolate_101(k, 0));
        const double bound = trim::moment_bound_101(k);
        worst = std::max(worst, s.residual());
        bounds = bounds && norm <= bound * (1.0 + 1e-9);
        rows.push_back(json{{"kernel", k.name}, {"slot", "101"}, {"residual", c.num(s.residual())},
                            {"norm", c.num(norm)}, {"bound", c.num(bound)}});
    }
    for (const auto& k : trim::battery_012()) {
        const auto s = trim::split_012(k, f2.J, f2.A, f2.dA, f2.B, f2.dB, f2.radius);
        const double norm = trim::norm_012(trim::interpolate_012(k, trim::Slot::first, 0), 1e-9);
        const double bound = trim::moment_bound_012(k, trim::Slot::first, 1e-9);
        worst = std::max(worst, s.residual());
        bounds = bounds && norm <= bound * (1.0 + 1e-8);
        rows.push_back(json{{"kernel", k.name}, {"slot", "012"}, {"residual", c.num(s.residual())},
                            {"norm", c.num(norm)}, {"bound", c.num(bound)}});
    }
    if (c.stream) {
        for (const auto& r : rows) c.emit(r);
    } else {
        json j;
        j["kernels"] = rows;
        j["max_residual"] = c.num(worst);
        j["norm_bounds_hold"] = bounds;
        c.emit(j);
    }
}

void cmd_zeta1_check(Context& c) {
    require_format(c, "zeta1-check", false, true);
    long lo = 0, hi = 5;
    if (auto w = h_window(c)) std::tie(lo, hi) = *w;
    const auto z = perturb::verify_zeta1(c.params, c.profile, lo, hi);
    json j;
    j["h"] = z.h;
    j["momentum"] = c.arr(z.momentum);
    j["position"] = c.arr(z.position);
    j["momentum_residual"] = c.num(z.momentum_residual);
    j["position_residual"] = c.num(z.position_residual);
    j["residual"] = c.num(z.residual());
    j["delta1"] = c.num(c.params.psi_dim());
    c.emit(j);
}

struct FlagSpec {
    const char* flag;
    const char* key;
    const char* help;
};

const FlagSpec kFlags[] = {
    {"--d", "model.d", "spatial dimension (1, 2, 3)"},
    {"--N", "model.N", "number of field components (even, >= 4, != 8)"},
    {"--eps", "model.eps", "deformation parameter"},
    {"--gamma", "model.gamma", "RG scale factor"},
    {"--s", "model.s", "Gevrey order of the cutoff"},
    {"--eps-guard", "model.eps_guard", "validity radius for |eps|"},
    {"--tol", "quadrature.tol", "propagator tolerance relative to the band scale"},
    {"--max-panels", "quadrature.max_panels", "quadrature panel cap"},
    {"--grid-density", "quadrature.grid_density", "radius grid points per decade"},
    {"--band", "windows.band", "scale band: single:h, below:h, above:h, range:h1:h2, full"},
    {"--x-min", "windows.x_min", "smallest radius"},
    {"--x-max", "windows.x_max", "largest radius"},
    {"--h-min", "windows.h_min", "lowest scale of the window (or auto)"},
    {"--h-max", "windows.h_max", "highest scale of the window (or auto)"},
    {"--fit-lo", "windows.fit_lo", "decay-fit window start"},
    {"--fit-hi", "windows.fit_hi", "decay-fit window end"},
    {"--fit-target", "windows.fit_target", "band or E1"},
    {"--response", "windows.response", "G, F, freeG, freeF, E1, E2"},
    {"--max-endpoints", "windows.max_endpoints", "largest endpoint count for trees"},
    {"--constraint", "windows.constraint", "none, two-phi, two-J"},
    {"--root-label", "windows.root_label", "root kernel label n,m,l[,p...]"},
    {"--endpoint-type", "windows.endpoint_type", "Nu, Lambda, PhiSource, JSource"},
    {"--format", "output.format", "default, json or csv"},
    {"--output", "output.path", "output file, - for standard output"},
    {"--json-precision", "output.json_precision", "significant digits in JSON"},
    {"--csv-precision", "output.csv_precision", "significant digits in CSV"},
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerics for the RG fixed point of the fractional symplectic-fermion model", "rgfp"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    std::string config_path;
    app.add_option("--config", config_path, "INI configuration file");
    bool dump = false, stream = false;
    app.add_flag("--dump-config", dump, "print the effective configuration and exit");
    app.add_flag("--stream", stream, "one JSON record per line");
    std::optional<int> threads;
    app.add_option("--threads", threads, "worker cap (RGFP_THREADS as fallback)");
    std::vector<std::optional<std::string>> flag_values(std::size(kFlags));
    for (size_t i = 0; i < std::size(kFlags); ++i) app.add_option(kFlags[i].flag, flag_values[i], kFlags[i].help);

    using Handler = void (*)(Context&);
    const std::pair<const char*, Handler> commands[] = {
        {"exponents", cmd_exponents},     {"propagator", cmd_propagator}, {"response", cmd_response},
        {"scale-check", cmd_scale_check}, {"trees", cmd_trees},           {"decay-fit", cmd_decay_fit},
        {"trim-check", cmd_trim_check},   {"zeta1-check", cmd_zeta1_check},
    };
    const char* help[] = {"first-order exponents (JSON)",           "position-space propagator of a band",
                          "response functions and corrections",      "scale-invariance and power-law checks",
                          "tree counts, bound constants and eps0",   "stretched-exponential decay fit",
                          "trimming identities on the test battery", "zero-mode (zeta_1 = 0) check"};
    std::vector<CLI::App*> subs;
    for (size_t i = 0; i < std::size(commands); ++i) subs.push_back(app.add_subcommand(commands[i].first, help[i]));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        Context c;
        if (!config_path.empty()) c.cfg.load_file(config_path);
        for (size_t i = 0; i < std::size(kFlags); ++i)
            if (flag_values[i]) c.cfg.set(kFlags[i].key, *flag_values[i]);
        if (stream) c.cfg.set("output.stream", "true");
        c.cfg.validate();
        if (dump) {
            out << c.cfg.dump();
            return 0;
        }
        Handler handler = nullptr;
        std::string name;
        for (size_t i = 0; i < subs.size(); ++i)
            if (subs[i]->parsed()) {
                handler = commands[i].second;
                name = commands[i].first;
            }
        if (!handler) {
            err << "error: a subcommand is required\n" << app.help();
            return 1;
        }
        if (threads) {
            set_max_threads(*threads);
        } else if (const char* env = std::getenv("RGFP_THREADS")) {
            try {
                set_max_threads(std::stoi(env));
            } catch (const std::exception&) {
                throw ConfigError("RGFP_THREADS must be an integer");
            }
        }
        c.params = c.cfg.model();
        c.profile = cutoff::make_profile(c.params.gevrey_s);
        c.json_digits = static_cast<int>(c.cfg.get_long("output.json_precision"));
        c.csv_digits = static_cast<int>(c.cfg.get_long("output.csv_precision"));
        c.stream = c.cfg.get_bool("output.stream");
        c.format = c.cfg.get("output.format");
        if (c.format == "default") c.format = (name == "propagator" || name == "response") ? "csv" : "json";

        handler(c);

        const std::string text = provenance_line(c.cfg.hash(), c.profile.id()) + "\n" + c.body.str();
        const std::string path = c.cfg.get("output.path");
        if (path == "-") {
            out << text;
        } else {
            std::ofstream f(path, std::ios::binary);
            if (!f) throw ConfigError("cannot open output file " + path);
            f << text;
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace rgfp::cli
