#include "rgfp/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rgfp/errors.hpp"
#include "rgfp/parallel.hpp"
#include "rgfp/quadrature.hpp"

namespace rgfp::prop {

ScaleBand ScaleBand::range(long h1, long h2) {
    if (!(h1 < h2)) throw ConfigError("range band needs h1 < h2");
    return {Kind::range, 0, h1, h2};
}

ScaleBand ScaleBand::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    auto num = [&](size_t i) {
        try {
            size_t used = 0;
            long v = std::stol(parts.at(i), &used);
            if (used != parts[i].size()) throw ConfigError("");
            return v;
        } catch (...) {
            throw ConfigError("bad band specification '" + text + "'");
        }
    };
    if (parts.empty()) throw ConfigError("empty band specification");
    const std::string& k = parts[0];
    if (k == "full" && parts.size() == 1) return full();
    if (k == "single" && parts.size() == 2) return single(num(1));
    if (k == "below" && parts.size() == 2) return below(num(1));
    if (k == "above" && parts.size() == 2) return above(num(1));
    if (k == "range" && parts.size() == 3) return range(num(1), num(2));
    throw ConfigError("bad band specification '" + text + "'");
}

std::string ScaleBand::str() const {
    switch (kind) {
        case Kind::single: return "single:" + std::to_string(h);
        case Kind::below: return "below:" + std::to_string(h);
        case Kind::above: return "above:" + std::to_string(h);
        case Kind::range: return "range:" + std::to_string(h1) + ":" + std::to_string(h2);
        case Kind::full: return "full";
    }
    return "?";
}

namespace {

double gpow(double gamma, long h) { return h == 0 ? 1.0 : std::pow(gamma, static_cast<double>(h)); }

}  // namespace

double momentum_weight(const ScaleBand& band, const ModelParams& params, const CutoffProfile& profile,
                       double k) {
    const double g = params.gamma;
    switch (band.kind) {
        case ScaleBand::Kind::single: return cutoff::eval_band(profile, params, band.h, k);
        case ScaleBand::Kind::below: return cutoff::eval(profile, k / gpow(g, band.h));
        case ScaleBand::Kind::above: return 1.0 - cutoff::eval(profile, k / gpow(g, band.h - 1));
        case ScaleBand::Kind::range:
            return cutoff::eval(profile, k / gpow(g, band.h2)) - cutoff::eval(profile, k / gpow(g, band.h1));
        case ScaleBand::Kind::full: return 1.0;
    }
    return 0.0;
}

double band_scale(const ModelParams& params, long h) {
    return std::pow(params.gamma, static_cast<double>(h) * (params.d - params.alpha()));
}

double riesz_constant(int d, double alpha) {
    if (d < 1 || d > 3) throw DomainError("riesz_constant: d must be 1, 2 or 3");
    if (!(alpha > 0.0 && alpha < d)) {
        std::ostringstream os;
        os << "riesz_constant: alpha = " << alpha << " outside (0, d); Gamma((d-alpha)/2) has a pole";
        throw DomainError(os.str());
    }
    return std::pow(2.0, -alpha) * std::pow(M_PI, -0.5 * d) * std::tgamma(0.5 * (d - alpha)) /
           std::tgamma(0.5 * alpha);
}

namespace {

double eval_below(long h, const ModelParams& params, const CutoffProfile& profile, double x,
                  const EvalOptions& opt) {
    const double top = gpow(params.gamma, h);
    quad::RadialOptions ro;
    ro.power = -params.alpha();
    ro.max_panels = opt.max_panels;
    ro.abs_tol = 0.5 * opt.rel_tol * band_scale(params, h);
    const double plateau = radial_fourier(params.d, [](double) { return 1.0; }, x, 0.0, 0.5 * top, ro);
    const double edge = radial_fourier(
        params.d, [&](double k) { return cutoff::eval(profile, k / top); }, x, 0.5 * top, top, ro);
    return plateau + edge;
}

}  // namespace

double eval(const ScaleBand& band, const ModelParams& params, const CutoffProfile& profile, double x,
            const EvalOptions& opt) {
    if (!(x >= 0.0)) throw DomainError("propagator: x must be >= 0");
    const double g = params.gamma;
    quad::RadialOptions ro;
    ro.power = -params.alpha();
    ro.max_panels = opt.max_panels;
    switch (band.kind) {
        case ScaleBand::Kind::full:
        case ScaleBand::Kind::above: {
            if (x == 0.0) throw DomainError("propagator " + band.str() + " is singular at x = 0");
            const double full = riesz_constant(params.d, params.alpha()) * std::pow(x, params.alpha() - params.d);
            if (band.kind == ScaleBand::Kind::full) return full;
            return full - eval_below(band.h - 1, params, profile, x, opt);
        }
        case ScaleBand::Kind::below: return eval_below(band.h, params, profile, x, opt);
        case ScaleBand::Kind::single: {
            ro.abs_tol = opt.rel_tol * band_scale(params, band.h);
            const double top = gpow(g, band.h);
            return radial_fourier(
                params.d, [&](double k) { return cutoff::eval_band(profile, params, band.h, k); }, x,
                0.5 * top / g, top, ro);
        }
        case ScaleBand::Kind::range: {
            ro.abs_tol = opt.rel_tol * band_scale(params, band.h1);
            return radial_fourier(
                params.d, [&](double k) { return momentum_weight(band, params, profile, k); }, x,
                0.5 * gpow(g, band.h1), gpow(g, band.h2), ro);
        }
    }
    return 0.0;
}

DecayFit fit_stretched_exponential(const std::vector<double>& xs, const std::vector<double>& values,
                                   const Window& w, double gamma, const FitOptions& opt) {
    if (xs.size() != values.size() || xs.size() < 3) throw FitError("decay fit: need matching samples");
    const size_t n = xs.size();
    std::vector<double> a(n);
    for (size_t i = 0; i < n; ++i) a[i] = std::fabs(values[i]);

    std::vector<size_t> maxima;
    for (size_t i = 1; i + 1 < n; ++i)
        if (a[i] > 0.0 && a[i] >= a[i - 1] && a[i] >= a[i + 1]) maxima.push_back(i);
    // Upper envelope: keep maxima not exceeded by any later maximum.
    std::vector<size_t> env;
    double run = 0.0;
    for (auto it = maxima.rbegin(); it != maxima.rend(); ++it) {
        if (a[*it] >= run) {
            run = a[*it];
            if (xs[*it] >= w.lo && xs[*it] <= w.hi) env.push_back(*it);
        }
    }
    std::reverse(env.begin(), env.end());
    if (env.size() < opt.min_points) {
        std::ostringstream os;
        os << "fit-degenerate: only " << env.size() << " envelope maxima in [" << w.lo << ", " << w.hi << "]";
        throw FitError(os.str());
    }

    std::vector<double> y(env.size()), xe(env.size());
    for (size_t j = 0; j < env.size(); ++j) {
        y[j] = std::log(a[env[j]]);
        xe[j] = xs[env[j]] / gamma;
    }
    struct Line {
        double A, c, sse;
    };
    auto solve = [&](double sig) {
        const size_t m = y.size();
        double tb = 0.0, yb = 0.0;
        std::vector<double> t(m);
        for (size_t j = 0; j < m; ++j) {
            t[j] = std::pow(xe[j], sig);
            tb += t[j];
            yb += y[j];
        }
        tb /= m;
        yb /= m;
        double stt = 0.0, sty = 0.0;
        for (size_t j = 0; j < m; ++j) {
            stt += (t[j] - tb) * (t[j] - tb);
            sty += (t[j] - tb) * (y[j] - yb);
        }
        Line L;
        L.c = stt > 0.0 ? -sty / stt : 0.0;
        L.A = yb + L.c * tb;
        L.sse = 0.0;
        for (size_t j = 0; j < m; ++j) {
            const double r = y[j] - (L.A - L.c * t[j]);
            L.sse += r * r;
        }
        return L;
    };

    double best_sig;
    if (opt.fixed_sigma) {
        best_sig = *opt.fixed_sigma;
    } else {
        const double step = 1e-3;
        best_sig = opt.sigma_lo;
        double best = std::numeric_limits<double>::infinity();
        for (double s = opt.sigma_lo; s <= opt.sigma_hi + 1e-12; s += step) {
            const double e = solve(s).sse;
            if (e < best) {
                best = e;
                best_sig = s;
            }
        }
        double lo = std::max(opt.sigma_lo, best_sig - step), hi = std::min(opt.sigma_hi, best_sig + step);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = solve(x1).sse, f2 = solve(x2).sse;
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = solve(x1).sse;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = solve(x2).sse;
            }
        }
        const double cand = 0.5 * (lo + hi);
        if (solve(cand).sse <= best) best_sig = cand;
    }
    const Line L = solve(best_sig);
    if (!(L.c > 0.0)) throw FitError("fit-degenerate: fitted decay rate is not positive");

    DecayFit out;
    out.sigma_fit = best_sig;
    out.c = L.c;
    out.C_ls = std::exp(L.A);
    out.residual = std::sqrt(L.sse / y.size());
    out.window = w;
    out.n_points = y.size();
    double C = out.C_ls;
    size_t inside = 0;
    for (size_t i = 0; i < n; ++i) {
        if (xs[i] < w.lo || xs[i] > w.hi) continue;
        ++inside;
        if (a[i] > 0.0) C = std::max(C, a[i] * std::exp(L.c * std::pow(xs[i] / gamma, best_sig)));
    }
    out.C = C;
    out.n_samples = inside;
    return out;
}

DecayFit decay_fit(const ScaleBand& band, const ModelParams& params, const CutoffProfile& profile,
                   const Window& w, const FitOptions& opt) {
    long h = 0;
    switch (band.kind) {
        case ScaleBand::Kind::single:
        case ScaleBand::Kind::below: h = band.h; break;
        case ScaleBand::Kind::range: h = band.h2; break;
        default: throw DomainError("decay_fit needs a compactly supported band (single, below or range)");
    }
    if (!(w.hi > w.lo) || !(w.lo > 0.0)) throw DomainError("decay_fit: bad window");
    const double step = opt.step * gpow(params.gamma, -h);
    const double end = opt.lookahead * w.hi;
    const size_t n = static_cast<size_t>(std::floor((end - w.lo) / step)) + 1;
    if (n > 400000) throw DomainError("decay_fit: too many samples; enlarge the step");
    std::vector<double> xs(n);
    for (size_t i = 0; i < n; ++i) xs[i] = w.lo + step * static_cast<double>(i);
    EvalOptions eo;
    eo.rel_tol = 1e-14;
    const auto vals = parallel_map(n, [&](size_t i) { return eval(band, params, profile, xs[i], eo); });
    return fit_stretched_exponential(xs, vals, w, params.gamma, opt);
}

Window stretched_window(const ModelParams& params, double t_lo, double t_hi, long h) {
    const double s = params.gevrey_s;
    const double f = params.gamma * gpow(params.gamma, -h);
    return Window{f * std::pow(t_lo, s), f * std::pow(t_hi, s)};
}

double verify_zero_mode(long h, const ModelParams& params, const CutoffProfile& profile) {
    const double g = params.gamma;
    const double kmin = 0.5 * gpow(g, h - 1);
    const double kmax = gpow(g, h);
    const double leak = 36.0;
    const double delta = kmin * kmin / (4.0 * leak);
    const double R = std::sqrt(40.0 / delta);
    const int d = params.d;
    const ScaleBand band = ScaleBand::single(h);
    EvalOptions eo;
    eo.rel_tol = 1e-13;
    auto integrand = [&](double r) {
        const double damp = std::exp(-delta * r * r);
        const double rp = d == 1 ? 1.0 : std::pow(r, d - 1);
        return rp * damp * eval(band, params, profile, r, eo);
    };
    quad::Options qo;
    qo.abs_tol = 1e-12 * std::pow(g, -static_cast<double>(h) * params.alpha());
    qo.initial_panels = static_cast<int>(std::ceil(R * kmax / M_PI)) + 1;
    qo.max_panels = 200000;
    const double v = quad::integrate_adaptive(integrand, 0.0, R, qo).value;
    return std::fabs(quad::sphere_area(d) * v);
}

}  // namespace rgfp::prop
