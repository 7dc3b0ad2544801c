#include "rgfp/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "rgfp/errors.hpp"

namespace rgfp {

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

namespace {

double pairwise(const double* v, size_t n) {
    if (n <= 32) {
        CompensatedSum s;
        for (size_t i = 0; i < n; ++i) s.add(v[i]);
        return s.value();
    }
    const size_t h = n / 2;
    CompensatedSum s;
    s.add(pairwise(v, h));
    s.add(pairwise(v + h, n - h));
    return s.value();
}

}  // namespace

double pairwise_sum(const std::vector<double>& v) { return v.empty() ? 0.0 : pairwise(v.data(), v.size()); }

namespace quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Rule {
    std::array<double, 21> x{};
    std::array<double, 21> wk{};
    std::array<double, 21> wg{};
};

const Rule& gk21() {
    static const Rule rule = [] {
        using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
        using G = boost::math::quadrature::gauss<double, 10>;
        const auto& xa = GK::abscissa();
        const auto& wka = GK::weights();
        const auto& wga = G::weights();
        Rule r;
        r.x[10] = 0.0;
        r.wk[10] = wka[0];
        r.wg[10] = 0.0;
        for (unsigned i = 1; i < xa.size(); ++i) {
            const double wg = (i % 2 == 1) ? wga[i / 2] : 0.0;
            r.x[10 - i] = -xa[i];
            r.x[10 + i] = xa[i];
            r.wk[10 - i] = r.wk[10 + i] = wka[i];
            r.wg[10 - i] = r.wg[10 + i] = wg;
        }
        return r;
    }();
    return rule;
}

struct Panel {
    double a, b, value, error, floor;
};

Panel eval_panel(const Integrand& f, double a, double b) {
    const Rule& r = gk21();
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    std::array<double, 21> fv{};
    double resk = 0.0, resg = 0.0, resabs = 0.0;
    for (int i = 0; i < 21; ++i) {
        fv[i] = f(c + hl * r.x[i]);
        if (!std::isfinite(fv[i])) {
            std::ostringstream os;
            os << "non-finite integrand at x = " << c + hl * r.x[i];
            throw NumericalError(os.str());
        }
        resk += r.wk[i] * fv[i];
        resg += r.wg[i] * fv[i];
        resabs += r.wk[i] * std::fabs(fv[i]);
    }
    const double mean = 0.5 * resk;
    double resasc = 0.0;
    for (int i = 0; i < 21; ++i) resasc += r.wk[i] * std::fabs(fv[i] - mean);
    const double ahl = std::fabs(hl);
    resasc *= ahl;
    resabs *= ahl;
    double err = std::fabs((resk - resg) * hl);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double floor = 50.0 * kEps * resabs;
    err = std::max(err, floor);
    return Panel{a, b, resk * hl, err, floor};
}

struct WorseFirst {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a > y.a;
    }
};

}  // namespace

Result integrate_adaptive(const Integrand& f, double a, double b, const Options& opt) {
    if (!(opt.abs_tol > 0.0) && !(opt.rel_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    if (a == b) return Result{};
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("integrate_adaptive needs a finite interval");

    std::priority_queue<Panel, std::vector<Panel>, WorseFirst> active;
    std::vector<Panel> settled;
    const int n0 = std::max(1, opt.initial_panels);
    const double w = (b - a) / n0;
    for (int i = 0; i < n0; ++i) {
        const double lo = a + i * w;
        const double hi = (i + 1 == n0) ? b : a + (i + 1) * w;
        active.push(eval_panel(f, lo, hi));
    }
    int panels = n0;

    auto totals = [&](double& value, double& error) {
        CompensatedSum v, e;
        std::vector<Panel> all = settled;
        auto copy = active;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
        for (const auto& p : all) {
            v.add(p.value);
            e.add(p.error);
        }
        value = v.value();
        error = e.value();
    };

    // Running totals for the stopping test; final totals are recomputed in a fixed order.
    // The stopping test ignores the per-panel roundoff floor, which bisection cannot reduce.
    CompensatedSum run_err_c, run_val_c;
    {
        auto copy = active;
        while (!copy.empty()) {
            run_err_c.add(copy.top().error - copy.top().floor);
            run_val_c.add(copy.top().value);
            copy.pop();
        }
    }
    double run_err = run_err_c.value();
    double run_val = run_val_c.value();

    auto target = [&](double value) { return std::max(opt.abs_tol, opt.rel_tol * std::fabs(value)); };

    while (!active.empty() && run_err > target(run_val)) {
        if (panels >= opt.max_panels) {
            double v, e;
            totals(v, e);
            std::ostringstream os;
            os << "adaptive quadrature did not converge on [" << a << ", " << b << "] after " << panels
               << " panels (estimate " << v << ", error " << e << ")";
            throw ConvergenceError(os.str(), v, e);
        }
        Panel p = active.top();
        active.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (p.error <= p.floor * 1.0000001 || mid <= p.a || mid >= p.b ||
            std::fabs(p.b - p.a) < 1e-15 * std::max(std::fabs(p.a), std::fabs(p.b))) {
            // Roundoff-limited panel: cannot be improved by bisection.
            run_err -= p.error - p.floor;
            settled.push_back(p);
            continue;
        }
        Panel l = eval_panel(f, p.a, mid);
        Panel r = eval_panel(f, mid, p.b);
        run_err += (l.error - l.floor + r.error - r.floor) - (p.error - p.floor);
        run_val += (l.value + r.value) - p.value;
        active.push(l);
        active.push(r);
        ++panels;
    }
    Result res;
    totals(res.value, res.error);
    res.panels = panels;
    return res;
}

Result integrate_adaptive(const Integrand& f, double a, double b, double tol) {
    Options opt;
    opt.abs_tol = tol;
    return integrate_adaptive(f, a, b, opt);
}

Result integrate_semi_infinite(const Integrand& f, double a, const Options& opt) {
    auto g = [&](double t) {
        const double om = 1.0 - t;
        const double x = a + t / om;
        const double v = f(x);
        return v == 0.0 ? 0.0 : v / (om * om);
    };
    return integrate_adaptive(g, 0.0, 1.0, opt);
}

double radial_kernel(int d, double t) {
    switch (d) {
        case 1: return std::cos(t);
        case 2: return boost::math::cyl_bessel_j(0, std::fabs(t));
        case 3: {
            const double a = std::fabs(t);
            if (a < 1e-4) return 1.0 - a * a / 6.0;
            return std::sin(a) / a;
        }
        default: throw DomainError("radial kernel: d must be 1, 2 or 3");
    }
}

double radial_prefactor(int d) {
    using std::numbers::pi;
    switch (d) {
        case 1: return 1.0 / pi;
        case 2: return 1.0 / (2.0 * pi);
        case 3: return 1.0 / (2.0 * pi * pi);
        default: throw DomainError("radial prefactor: d must be 1, 2 or 3");
    }
}

double sphere_area(int d) {
    using std::numbers::pi;
    switch (d) {
        case 1: return 2.0;
        case 2: return 2.0 * pi;
        case 3: return 4.0 * pi;
        default: throw DomainError("sphere area: d must be 1, 2 or 3");
    }
}

double radial_fourier(int d, const Integrand& f, double x, double k_lo, double k_hi,
                      const RadialOptions& opt) {
    const double pre = radial_prefactor(d);
    const double expo = opt.power + d - 1;
    Options qo;
    qo.abs_tol = opt.abs_tol / pre;
    qo.max_panels = opt.max_panels;
    x = std::fabs(x);

    if (std::isinf(k_hi)) {
        auto g = [&](double k) { return f(k) * std::pow(k, expo) * radial_kernel(d, k * x); };
        return pre * integrate_semi_infinite(g, k_lo, qo).value;
    }
    if (!(k_hi > k_lo)) return 0.0;
    const double phase = (k_hi - k_lo) * x;
    qo.initial_panels = static_cast<int>(std::min(20000.0, std::ceil(phase / std::numbers::pi))) + 1;

    if (k_lo == 0.0 && expo != 0.0) {
        const double dp = d + opt.power;
        if (!(dp > 0.0)) throw DomainError("radial_fourier: non-integrable power at k = 0");
        const double q = 1.0 / dp;
        auto g = [&](double t) {
            const double k = std::pow(t, q);
            return f(k) * radial_kernel(d, k * x);
        };
        return pre * q * integrate_adaptive(g, 0.0, std::pow(k_hi, dp), qo).value;
    }
    auto g = [&](double k) {
        const double pw = expo == 0.0 ? 1.0 : std::pow(k, expo);
        return f(k) * pw * radial_kernel(d, k * x);
    };
    return pre * integrate_adaptive(g, k_lo, k_hi, qo).value;
}

double radial_fourier(int d, const Integrand& f, double x, double tol) {
    RadialOptions opt;
    opt.abs_tol = tol;
    return radial_fourier(d, f, x, 0.0, std::numeric_limits<double>::infinity(), opt);
}

double tree_distance(const std::vector<Point>& points, int d) {
    const size_t n = points.size();
    if (n <= 1) return 0.0;
    auto dist = [&](size_t i, size_t j) {
        double s = 0.0;
        for (int c = 0; c < d; ++c) {
            const double t = points[i][c] - points[j][c];
            s += t * t;
        }
        return std::sqrt(s);
    };
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<char> in(n, 0);
    in[0] = 1;
    for (size_t j = 1; j < n; ++j) best[j] = dist(0, j);
    CompensatedSum total;
    for (size_t step = 1; step < n; ++step) {
        size_t pick = n;
        for (size_t j = 0; j < n; ++j)
            if (!in[j] && (pick == n || best[j] < best[pick])) pick = j;
        in[pick] = 1;
        total.add(best[pick]);
        for (size_t j = 0; j < n; ++j)
            if (!in[j]) best[j] = std::min(best[j], dist(pick, j));
    }
    return total.value();
}

void WeightSpec::validate() const {
    if (!(cbar >= 0.0)) throw DomainError("weight: cbar must be >= 0");
    if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("weight: sigma must lie in (0, 1)");
    if (!(gamma > 1.0)) throw DomainError("weight: gamma must be > 1");
}

NormResult weighted_l1_norm(const PointKernel& kernel, int n_points, int d, const WeightSpec& weight,
                            const GridSpec& grid) {
    weight.validate();
    if (n_points < 1 || d < 1 || d > 3) throw DomainError("weighted_l1_norm: bad point count or dimension");
    if (!(grid.spacing > 0.0) || !(grid.half_width > 0.0)) throw DomainError("weighted_l1_norm: bad grid");
    NormResult out;
    std::vector<Point> pts(n_points, Point{0.0, 0.0, 0.0});
    const int dims = (n_points - 1) * d;
    if (dims == 0) {
        out.value = std::fabs(kernel(pts));
        return out;
    }
    const long m = 2 * static_cast<long>(std::llround(grid.half_width / grid.spacing)) + 1;
    double total_points = std::pow(static_cast<double>(m), dims);
    if (total_points > 5e7) throw DomainError("weighted_l1_norm: grid too large");
    const double h = 2.0 * grid.half_width / static_cast<double>(m - 1);
    std::vector<long> idx(dims, 0);
    CompensatedSum acc;
    double peak = 0.0, boundary = 0.0;
    while (true) {
        double wtrap = 1.0;
        bool on_boundary = false;
        for (int c = 0; c < dims; ++c) {
            const double coord = -grid.half_width + h * static_cast<double>(idx[c]);
            pts[1 + c / d][c % d] = coord;
            if (idx[c] == 0 || idx[c] == m - 1) {
                wtrap *= 0.5;
                on_boundary = true;
            }
        }
        double v = std::fabs(kernel(pts));
        if (v != 0.0 && weight.cbar != 0.0) {
            const double st = tree_distance(pts, d);
            v *= std::exp(weight.cbar * std::pow(st / weight.gamma, weight.sigma));
        }
        peak = std::max(peak, v);
        if (on_boundary) boundary = std::max(boundary, v);
        acc.add(wtrap * v);
        int c = 0;
        while (c < dims && ++idx[c] == m) idx[c++] = 0;
        if (c == dims) break;
    }
    out.value = acc.value() * std::pow(h, dims);
    out.boundary_ratio = peak > 0.0 ? boundary / peak : 0.0;
    if (out.boundary_ratio > 1e-10) {
        out.truncation_warning = true;
        std::ostringstream os;
        os << "kernel support truncated: boundary/peak = " << out.boundary_ratio;
        out.message = os.str();
    }
    return out;
}

}  // namespace quad
}  // namespace rgfp
