#include "rgfp/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rgfp/errors.hpp"
#include "rgfp/parallel.hpp"
#include "rgfp/quadrature.hpp"

namespace rgfp::response {

using prop::ScaleBand;

double free_G(const ModelParams& params, const CutoffProfile& profile, double x) {
    return prop::eval(ScaleBand::below(0), params, profile, x) + prop::eval(ScaleBand::above(1), params, profile, x);
}

double free_F(const ModelParams& params, const CutoffProfile& profile, double x) {
    const double lo = prop::eval(ScaleBand::below(0), params, profile, x);
    const double hi = prop::eval(ScaleBand::above(1), params, profile, x);
    return -2.0 * params.N * (lo * lo + 2.0 * lo * hi + hi * hi);
}

double band_term(long h, const ModelParams& params, const CutoffProfile& profile, double x) {
    const double gh = std::pow(params.gamma, static_cast<double>(h));
    // The prefactor grows with h while p_0 decays, so tighten p_0 down to its roundoff floor.
    prop::EvalOptions eo;
    eo.rel_tol = std::clamp(1e-13 / prop::band_scale(params, h), 1e-15, 1e-13);
    return prop::band_scale(params, h) * prop::eval(ScaleBand::single(0), params, profile, gh * x, eo);
}

namespace {

constexpr double kTermTol = 1e-13;
constexpr double kMaxArg = 1e6;
// p_0 values below this are at the roundoff floor of the oscillatory quadrature.
constexpr double kTermNoise = 1e-15;

long floor_log(double gamma, double v) { return static_cast<long>(std::floor(std::log(v) / std::log(gamma))); }

// Ratio of consecutive lower-tail terms, gamma^-(d - alpha).
double tail_ratio(const ModelParams& params) { return std::pow(params.gamma, -(params.d - params.alpha())); }

std::vector<double> terms(const ModelParams& params, const CutoffProfile& profile, double x, long lo, long hi) {
    if (hi < lo) return {};
    return parallel_map(static_cast<size_t>(hi - lo + 1),
                        [&](size_t i) { return band_term(lo + static_cast<long>(i), params, profile, x); });
}

void check_window(const ScaleSumResult& r, const ScaleSumSpec& spec, const char* what, double x) {
    if (!spec.check_boundary || r.h_max < r.h_min) return;
    if (!(r.boundary_mass <= spec.boundary_tol * std::fabs(r.value))) {
        std::ostringstream os;
        os << what << ": window [" << r.h_min << ", " << r.h_max << "] too narrow at x = " << x
           << " (boundary mass " << r.boundary_mass << ", value " << r.value << ")";
        throw WindowError(os.str(), r.boundary_mass);
    }
}

}  // namespace

ScaleSumSpec auto_window(const ModelParams& params, const CutoffProfile& profile, double x) {
    if (!(x > 0.0)) throw DomainError("scale sum needs x > 0");
    const double g = params.gamma;
    // Start at the scale where gamma^h x ~ 1 and extend in both directions.
    const long h0 = floor_log(g, 1.0 / x);
    long lo = h0, hi = h0;
    CompensatedSum sum;
    sum += band_term(h0, params, profile, x);
    const double r = tail_ratio(params);
    for (;;) {
        const double t = band_term(--lo, params, profile, x);
        sum += t;
        if (std::fabs(t) * r / (1.0 - r) < kTermTol * std::fabs(sum.value())) break;
        if (h0 - lo > 4000) throw WindowError("scale sum: lower tail does not decay", std::fabs(t));
    }
    int small = 0;
    for (;;) {
        ++hi;
        const double y = std::pow(g, static_cast<double>(hi)) * x;
        if (y > kMaxArg) break;
        const double t = band_term(hi, params, profile, x);
        sum += t;
        const bool negligible = std::fabs(t) < std::max(kTermTol * std::fabs(sum.value()),
                                                        kTermNoise * prop::band_scale(params, hi));
        small = (y >= 4.0 && negligible) ? small + 1 : 0;
        if (small >= 2) break;
    }
    return ScaleSumSpec::fixed(lo, hi);
}

ScaleSumResult scale_sum_G_detailed(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps,
                                    double x, const ScaleSumSpec& spec_in) {
    const ScaleSumSpec spec = spec_in.auto_window ? auto_window(params, profile, x) : spec_in;
    ScaleSumResult r;
    r.h_min = spec.h_min;
    r.h_max = spec.h_max;
    if (spec.h_max < spec.h_min) return r;
    if (!(x > 0.0)) throw DomainError("scale_sum_G needs x > 0");
    const double g = params.gamma;
    const double d1 = exps.delta1;
    const double shift = 2.0 * d1 - (params.d - params.alpha());
    std::vector<double> t = terms(params, profile, x, spec.h_min, spec.h_max);
    // band_term carries gamma^(h(d-alpha)); rescale when Delta1 differs from [psi].
    if (shift != 0.0)
        for (size_t i = 0; i < t.size(); ++i) t[i] *= std::pow(g, shift * static_cast<double>(spec.h_min + static_cast<long>(i)));
    r.value = pairwise_sum(t);
    const double q = std::pow(g, -2.0 * d1);
    r.boundary_mass = std::fabs(t.front()) * q / (1.0 - q) + std::fabs(t.back());
    check_window(r, spec, "scale_sum_G", x);
    return r;
}

double scale_sum_G(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double x,
                   const ScaleSumSpec& spec) {
    return scale_sum_G_detailed(params, profile, exps, x, spec).value;
}

ScaleSumResult scale_sum_F_detailed(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps,
                                    double y, const ScaleSumSpec& spec_in) {
    const ScaleSumSpec spec = spec_in.auto_window ? auto_window(params, profile, y) : spec_in;
    ScaleSumResult r;
    r.h_min = spec.h_min;
    r.h_max = spec.h_max;
    if (spec.h_max < spec.h_min) return r;
    if (!(y > 0.0)) throw DomainError("scale_sum_F needs y > 0");
    const double g = params.gamma;
    const std::vector<double> p = terms(params, profile, y, spec.h_min, spec.h_max);
    const size_t n = p.size();
    std::vector<double> wp(n);
    for (size_t i = 0; i < n; ++i)
        wp[i] = std::pow(g, 2.0 * exps.eta2 * static_cast<double>(spec.h_min + static_cast<long>(i))) * p[i];
    // Suffix sums Q_i = sum_{j>i} wp_j, accumulated from the top with compensation.
    std::vector<double> out(n);
    CompensatedSum suffix;
    for (size_t k = n; k-- > 0;) {
        out[k] = p[k] * (wp[k] + 2.0 * suffix.value());
        suffix += wp[k];
    }
    r.value = -2.0 * params.N * pairwise_sum(out);
    const double q = tail_ratio(params);
    r.boundary_mass = 2.0 * params.N * (std::fabs(out.front()) * q / (1.0 - q) + std::fabs(out.back()));
    check_window(r, spec, "scale_sum_F", y);
    return r;
}

double scale_sum_F(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double y,
                   const ScaleSumSpec& spec) {
    return scale_sum_F_detailed(params, profile, exps, y, spec).value;
}

double F_leading(const ModelParams& params, const Exponents& exps, double y) {
    const double a = params.alpha();
    return -2.0 * params.N * prop::riesz_constant(params.d, a) * prop::riesz_constant(params.d, a - 2.0 * exps.eta2) *
           std::pow(y, -2.0 * exps.delta2);
}

double F_remainder_ratio(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double y) {
    if (params.eps == 0.0) throw DomainError("F_remainder_ratio needs eps != 0");
    const double F = scale_sum_F(params, profile, exps, y);
    return std::fabs(F - F_leading(params, exps, y)) * std::pow(y, 2.0 * exps.delta2) / std::fabs(params.eps);
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& vs) {
    if (xs.size() != vs.size() || xs.size() < 2) throw DomainError("loglog_slope: need two or more points");
    const size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += std::log(xs[i]);
        my += std::log(std::fabs(vs[i]));
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double a = std::log(xs[i]) - mx;
        sxx += a * a;
        sxy += a * (std::log(std::fabs(vs[i])) - my);
    }
    return sxy / sxx;
}

TailProfile tail_profile(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double x,
                         const std::vector<long>& h_list) {
    if (!(x > 0.0)) throw DomainError("tail_profile needs x > 0");
    TailProfile t;
    const double g = params.gamma;
    const double xw = std::pow(x, 2.0 * exps.delta1);
    t.h = h_list;
    // P_{<=h} is the partial scale sum over h' <= h (the bands telescope).
    t.residual = parallel_map(h_list.size(), [&](size_t i) {
        return std::fabs(prop::eval(ScaleBand::below(h_list[i]), params, profile, x)) * xw;
    });
    t.expected_slope = 2.0 * exps.delta1 * std::log(g);
    t.plateau = prop::riesz_constant(params.d, params.alpha());
    double mh = 0.0, mr = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < h_list.size(); ++i)
        if (std::pow(g, static_cast<double>(h_list[i])) * x <= std::pow(g, -3.0) && t.residual[i] > 0.0)
            pts.emplace_back(static_cast<double>(h_list[i]), std::log(t.residual[i]));
    t.slope_points = pts.size();
    if (pts.size() >= 2) {
        for (auto& [a, b] : pts) {
            mh += a;
            mr += b;
        }
        mh /= pts.size();
        mr /= pts.size();
        double sxx = 0.0, sxy = 0.0;
        for (auto& [a, b] : pts) {
            sxx += (a - mh) * (a - mh);
            sxy += (a - mh) * (b - mr);
        }
        t.slope = sxy / sxx;
    } else {
        t.slope = std::numeric_limits<double>::quiet_NaN();
    }
    return t;
}

double correction_E1_free(const ModelParams& params, const CutoffProfile& profile, double x) {
    return prop::eval(ScaleBand::above(1), params, profile, x);
}

double correction_E2_free(const ModelParams& params, const CutoffProfile& profile, double x) {
    const double lo = prop::eval(ScaleBand::below(0), params, profile, x);
    const double hi = prop::eval(ScaleBand::above(1), params, profile, x);
    return -2.0 * params.N * (2.0 * lo * hi + hi * hi);
}

prop::DecayFit decay_fit_E1(const ModelParams& params, const CutoffProfile& profile, const prop::Window& w,
                            const prop::FitOptions& opt) {
    if (!(w.lo > 0.0) || !(w.hi > w.lo)) throw DomainError("decay_fit_E1: bad window");
    const double end = opt.lookahead * w.hi;
    const size_t n = static_cast<size_t>(std::floor((end - w.lo) / opt.step)) + 1;
    if (n > 400000) throw DomainError("decay_fit_E1: too many samples");
    std::vector<double> xs(n);
    for (size_t i = 0; i < n; ++i) xs[i] = w.lo + opt.step * static_cast<double>(i);
    prop::EvalOptions eo;
    eo.rel_tol = 1e-15;
    const auto v = parallel_map(n, [&](size_t i) { return prop::eval(ScaleBand::above(1), params, profile, xs[i], eo); });
    return prop::fit_stretched_exponential(xs, v, w, params.gamma, opt);
}

double ptilde(long h, const ModelParams& params, const CutoffProfile& profile, const Exponents& exps, double y) {
    const double g = params.gamma;
    const double gh = std::pow(g, static_cast<double>(h));
    const double eta = exps.eta2;
    quad::RadialOptions ro;
    ro.power = -(params.d / 2.0 + params.eps - 2.0 * eta);
    ro.abs_tol = 1e-14 * std::pow(gh, params.d / 2.0 - params.eps + 2.0 * eta);
    auto f = [&](double p) {
        const double q = p / gh;
        return std::log(q) * std::pow(q, -eta) * cutoff::eval_band(profile, params, h, p);
    };
    return quad::radial_fourier(params.d, f, y, 0.5 * gh / g, gh, ro);
}

PtildeCheck ptilde_bound_check(const ModelParams& params, const CutoffProfile& profile, const Exponents& exps,
                               const prop::Window& w, const std::vector<long>& h_list) {
    prop::FitOptions opt;
    opt.fixed_sigma = params.sigma();
    const size_t n = static_cast<size_t>(std::floor((opt.lookahead * w.hi - w.lo) / opt.step)) + 1;
    std::vector<double> ts(n);
    for (size_t i = 0; i < n; ++i) ts[i] = w.lo + opt.step * static_cast<double>(i);
    const auto v0 = parallel_map(n, [&](size_t i) { return ptilde(0, params, profile, exps, ts[i]); });
    const prop::DecayFit fit = prop::fit_stretched_exponential(ts, v0, w, params.gamma, opt);
    PtildeCheck c;
    c.C1 = fit.C;
    c.C2 = fit.c;
    c.sigma = params.sigma();
    const double g = params.gamma;
    const double expo = params.d / 2.0 - params.eps + 2.0 * exps.eta2;
    for (long h : h_list) {
        const double gh = std::pow(g, static_cast<double>(h));
        const auto ratios = parallel_map(n, [&](size_t i) {
            if (ts[i] > w.hi) return 0.0;
            const double y = ts[i] / gh;
            const double bound = c.C1 * std::pow(gh, expo) * std::exp(-c.C2 * std::pow(gh * y / g, c.sigma));
            return std::fabs(ptilde(h, params, profile, exps, y)) / bound;
        });
        for (double r : ratios) c.max_ratio = std::max(c.max_ratio, r);
        for (double t : ts)
            if (t <= w.hi) ++c.samples;
    }
    return c;
}

}  // namespace rgfp::response
