// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "rgfp/errors.hpp"
#include "rgfp/io.hpp"
#include "rgfp/perturb.hpp"
#include "rgfp/propagator.hpp"
#include "rgfp/quadrature.hpp"
#include "rgfp/response.hpp"
#include "rgfp/trees.hpp"
#include "rgfp/trimming.hpp"

using namespace rgfp;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int n, double budget_s, const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && dt > budget_s) {
        o.pass = false;
        o.detail += " (over the time budget)";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str(), dt);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

double eta_ratio(int d, int N, double eps, double g, double s) {
    const auto p = ModelParams::make(d, N, eps, g, s);
    return perturb::solve_eta2(p, cutoff::make_profile(s)).eta2 / eps;
}

const int kGrid[3][2] = {{1, 4}, {2, 6}, {3, 10}};

}  // namespace

int main() {
    report(1, 30, [] {
        double worst = 0.0;
        for (auto [d, N] : kGrid) {
            const double target = 2.0 * (N - 2) / (N - 8.0);
            worst = std::max(worst, std::fabs(eta_ratio(d, N, 1e-3, 2.0, 2.0) / target - 1.0));
        }
        return Outcome{worst < 0.01, "eta2/eps vs 2(N-2)/(N-8), worst relative deviation " + fmt("%.3e", worst)};
    });

    report(2, 10, [] {
        double worst = 0.0;
        for (int d = 1; d <= 3; ++d)
            for (double g : {1.5, 2.0, 3.0}) {
                const auto p = ModelParams::make(d, 4, 0.0, g);
                const double J = perturb::integral_J(p, cutoff::make_profile(2.0), 0.0);
                const double exact = quad::sphere_area(d) * std::log(g) / std::pow(2.0 * std::numbers::pi, d);
                worst = std::max(worst, std::fabs(J - exact) / exact);
            }
        return Outcome{worst < 1e-6, "bubble integral vs closed form, worst relative error " + fmt("%.3e", worst)};
    });

    report(3, 10, [] {
        double worst = 0.0;
        for (int d = 1; d <= 3; ++d) {
            const auto p = ModelParams::make(d, 4, 1e-3);
            worst = std::max(worst, perturb::verify_zeta1(p, cutoff::make_profile(2.0), 0, 5).residual());
        }
        return Outcome{worst < 1e-7, "zero-momentum residual over h = 0..5, d = 1..3: " + fmt("%.3e", worst)};
    });

    report(4, 120, [] {
        const auto prof = cutoff::make_profile(2.0);
        const auto p0 = ModelParams::make(1, 4, 0.0);
        const auto e0 = free_exponents(p0);
        const double C0 = prop::riesz_constant(1, p0.alpha());
        double worst = 0.0;
        for (double x : log_grid(0.5, 50.0, 16)) {
            const double ref = C0 * std::pow(x, p0.alpha() - 1.0);
            worst = std::max(worst, std::fabs(response::scale_sum_G(p0, prof, e0, x) / ref - 1.0));
        }
        const auto p = ModelParams::make(1, 4, 1e-3);
        const auto e = perturb::solve_eta2(p, prof);
        std::vector<double> ys, fs;
        for (double y = 1.0; y <= 10.0 * (1 + 1e-12); y *= std::pow(10.0, 1.0 / 16)) {
            ys.push_back(y);
            fs.push_back(response::scale_sum_F(p, prof, e, y));
        }
        const double slope = response::loglog_slope(ys, fs);
        const double dev = std::fabs(slope + 2.0 * e.delta2);
        return Outcome{worst < 1e-4 && dev < 1e-3, "G vs Riesz worst " + fmt("%.3e", worst) + ", F slope " +
                                                        fmt("%.6f", slope) + " vs " + fmt("%.6f", -2 * e.delta2)};
    });

    report(5, 0, [] {
        const auto prof = cutoff::make_profile(2.0);
        const auto p = ModelParams::make(1, 4, 1e-3);
        const auto e = perturb::solve_eta2(p, prof);
        const double g = p.gamma;
        double ident = 0.0, cov = 0.0;
        for (double x0 : {0.5, 1.3, 7.0}) {
            const auto w = response::auto_window(p, prof, x0);
            const double a = response::scale_sum_G(p, prof, e, g * x0, response::ScaleSumSpec::fixed(w.h_min, w.h_max, false));
            const double b =
                response::scale_sum_G(p, prof, e, x0, response::ScaleSumSpec::fixed(w.h_min + 1, w.h_max + 1, false));
            ident = std::max(ident, std::fabs(a - std::pow(g, -2.0 * e.delta1) * b) / std::fabs(a));
            const double r = response::free_G(p, prof, g * x0) / response::free_G(p, prof, x0);
            cov = std::max(cov, std::fabs(r * std::pow(g, 2.0 * p.psi_dim()) - 1.0));
        }
        return Outcome{ident < 1e-12 && cov < 1e-10,
                       "re-indexed sum residual " + fmt("%.3e", ident) + ", free covariance residual " + fmt("%.3e", cov)};
    });

    report(6, 120, [] {
        bool ok = true;
        std::string detail;
        for (double s : {2.0, 3.0}) {
            const auto p = ModelParams::make(1, 4, 1e-3, 2.0, s);
            const auto prof = cutoff::make_profile(s);
            const prop::Window w{8.0, 500.0};
            const prop::FitOptions fo;
            struct Target {
                const char* name;
                prop::DecayFit fit;
                std::function<double(double)> f;
            };
            prop::EvalOptions eo;
            eo.rel_tol = 1e-14;
            std::vector<Target> targets;
            targets.push_back({"p0", prop::decay_fit(prop::ScaleBand::single(0), p, prof, w, fo),
                               [&](double x) { return prop::eval(prop::ScaleBand::single(0), p, prof, x, eo); }});
            targets.push_back({"E1", response::decay_fit_E1(p, prof, w, fo),
                               [&](double x) { return response::correction_E1_free(p, prof, x); }});
            for (auto& t : targets) {
                const double rel = std::fabs(t.fit.sigma_fit * s - 1.0);
                size_t violations = 0, n = 0;
                for (double x = w.lo; x <= w.hi; x = w.lo + fo.step * static_cast<double>(++n)) {
                    const double bound = t.fit.C * std::exp(-t.fit.c * std::pow(x / p.gamma, t.fit.sigma_fit));
                    if (std::fabs(t.f(x)) > bound * (1.0 + 1e-12)) ++violations;
                }
                ok = ok && rel < 0.2 && violations == 0;
                detail += std::string(t.name) + "(s=" + fmt("%g", s) + ") sigma " + fmt("%.4f", t.fit.sigma_fit) +
                          " off by " + fmt("%.1f%%", 100 * rel) + ", " + std::to_string(violations) + "/" +
                          std::to_string(n) + " bound violations; ";
            }
        }
        return Outcome{ok, detail};
    });

    report(7, 0, [] {
        const auto p = ModelParams::make(1, 4, 0.0);
        std::vector<long> hs;
        for (long h = -20; h <= 4; ++h) hs.push_back(h);
        const auto t = response::tail_profile(p, cutoff::make_profile(2.0), free_exponents(p), 1.0, hs);
        const double rel = std::fabs(t.slope / t.expected_slope - 1.0);
        return Outcome{rel < 0.1, "tail slope " + fmt("%.6f", t.slope) + " vs " + fmt("%.6f", t.expected_slope) +
                                      " from " + std::to_string(t.slope_points) + " scales"};
    });

    report(8, 30, [] {
        // Large Schroeder numbers from their recurrence; skeleton counts are half of them.
        std::vector<double> r{1, 2};
        for (int k = 2; k <= 10; ++k) r.push_back((3.0 * (2 * k - 1) * r[k - 1] - (k - 2) * r[k - 2]) / (k + 1));
        bool counts = true;
        for (int k = 1; k <= 10; ++k) {
            const double oracle = k == 1 ? 1.0 : r[k - 1] / 2;
            const auto c = trees::count_shapes(k);
            counts = counts && static_cast<double>(c) == oracle && static_cast<double>(c) < std::pow(4.0, k);
            if (k <= 8) counts = counts && trees::enumerate(k).size() == c;
        }
        double lo = INFINITY, hi = 0.0;
        bool radii = true;
        for (int d = 1; d <= 3; ++d)
            for (int N : {4, 6, 10}) {
                const auto p = ModelParams::make(d, N, 1e-3);
                const auto prof = cutoff::make_profile(2.0);
                const auto c = trees::compute_constants(p, prof, perturb::solve_eta2(p, prof));
                const double e0 = trees::radius_estimate(c, p);
                radii = radii && e0 > 0.0 && std::isfinite(e0);
                lo = std::min(lo, e0);
                hi = std::max(hi, e0);
            }
        return Outcome{counts && radii, std::string("counts ") + (counts ? "match" : "differ") +
                                            ", eps0 in [" + fmt("%.3e", lo) + ", " + fmt("%.3e", hi) + "]"};
    });

    report(9, 0, [] {
        double worst = 0.0;
        bool bounds = true;
        const auto f1 = trim::standard_fields_101();
        for (const auto& k : trim::battery_101()) {
            worst = std::max(worst, trim::split_101(k, f1.phi, f1.psi, f1.dpsi, f1.radius).residual());
            bounds = bounds && trim::norm_101(trim::interpolate_101(k, 0), 1e-10) <=
                                   trim::moment_bound_101(k, 1e-10) * (1.0 + 1e-8);
        }
        const auto f2 = trim::standard_fields_012();
        for (const auto& k : trim::battery_012()) {
            worst = std::max(worst, trim::split_012(k, f2.J, f2.A, f2.dA, f2.B, f2.dB, f2.radius).residual());
            for (auto slot : {trim::Slot::first, trim::Slot::second})
                bounds = bounds && trim::norm_012(trim::interpolate_012(k, slot, 0), 1e-9) <=
                                       trim::moment_bound_012(k, slot, 1e-9) * (1.0 + 1e-8);
        }
        return Outcome{worst < 1e-8 && bounds, "identity residual " + fmt("%.3e", worst) + ", norm bounds " +
                                                   (bounds ? "hold" : "violated")};
    });

    report(10, 0, [] {
        double spread = 0.0, lin = 0.0;
        for (auto [d, N] : kGrid) {
            std::vector<double> v;
            for (double g : {1.5, 2.0, 3.0})
                for (double s : {2.0, 3.0}) v.push_back(eta_ratio(d, N, 1e-3, g, s));
            const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
            spread = std::max(spread, (*mx - *mn) / std::fabs(0.5 * (*mx + *mn)));
            const double ref = eta_ratio(d, N, 1e-3, 2.0, 2.0);
            for (double eps : {1e-4, 3e-4, 6e-4})
                lin = std::max(lin, std::fabs(eta_ratio(d, N, eps, 2.0, 2.0) / ref - 1.0));
        }
        return Outcome{spread < 0.02 && lin < 0.01,
                       "gamma/s spread " + fmt("%.3e", spread) + ", eps-linearity deviation " + fmt("%.3e", lin)};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
