#include "rgfp/trimming.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rgfp/errors.hpp"

namespace rgfp::trim {

namespace {

double norm2(const Point& w, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += w[i] * w[i];
    return std::sqrt(s);
}

double maxnorm(const Point& w, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s = std::max(s, std::fabs(w[i]));
    return s;
}

quad::Options opts(double tol) {
    quad::Options o;
    o.abs_tol = tol;
    o.max_panels = 4000;
    o.initial_panels = 2;
    return o;
}

// Int over [-R, 0] and [0, R], so kinks at the origin fall on panel ends.
double split_line(const quad::Integrand& f, double R, double tol) {
    return quad::integrate_adaptive(f, -R, 0.0, opts(0.5 * tol)).value +
           quad::integrate_adaptive(f, 0.0, R, opts(0.5 * tol)).value;
}

double box_rec(const std::function<double(const Point&)>& f, int d, int axis, Point& p, double R, double tol) {
    if (axis == d) return f(p);
    const double inner = tol / (2.0 * R);
    return split_line(
        [&](double t) {
            Point q = p;
            q[axis] = t;
            return box_rec(f, d, axis + 1, q, R, inner);
        },
        R, tol);
}

void check_dim(int d) {
    if (d < 1 || d > 3) throw DomainError("trimming: d must be 1, 2 or 3");
}

void check_line(int d, const char* what) {
    if (d != 1) throw DomainError(std::string(what) + ": test-field forms are implemented for d = 1");
}

// Int over the square [-R, R]^2 in polar coordinates: the rho dr factor absorbs the 1/|w| growth
// of interpolated kernels at the origin. Sectors end on the diagonals, where the square's radial
// limit has kinks.
double square_polar(const std::function<double(double, double)>& h, double R, double tol) {
    const double q = std::numbers::pi / 4.0;
    double total = 0.0;
    for (int s = 0; s < 8; ++s) {
        auto angular = [&](double th) {
            const double c = std::cos(th), sn = std::sin(th);
            const double rmax = R / std::max(std::fabs(c), std::fabs(sn));
            return quad::integrate_adaptive([&](double r) { return r * h(r * c, r * sn); }, 0.0, rmax,
                                            opts(tol / (16.0 * R)))
                .value;
        };
        total += quad::integrate_adaptive(angular, s * q, (s + 1) * q, opts(tol / 8.0)).value;
    }
    return total;
}

// K(w) = Int_{-L}^{L} a(x) b(x + w) dx
double correlate(const Field& a, const Field& b, double w, double L, double tol) {
    return quad::integrate_adaptive([&](double x) { return a(x) * b(x + w); }, -L, L, opts(tol)).value;
}

}  // namespace

double TestKernel101::G(const Point& x, const Point& z) const {
    Point w{};
    for (int i = 0; i < d; ++i) w[i] = z[i] - x[i];
    return g(w);
}

double TestKernel012::F(const Point& y, const Point& z1, const Point& z2) const {
    Point a{}, b{};
    for (int i = 0; i < d; ++i) {
        a[i] = z1[i] - y[i];
        b[i] = z2[i] - y[i];
    }
    return f(a, b);
}

double integrate_box(const std::function<double(const Point&)>& f, int d, double R, double tol) {
    check_dim(d);
    if (!(R > 0.0)) throw DomainError("integrate_box: R must be positive");
    Point p{};
    return box_rec(f, d, 0, p, R, tol);
}

double localize_101(const TestKernel101& k, double tol) { return integrate_box(k.g, k.d, k.support_radius, tol); }

TestKernel101 interpolate_101(const TestKernel101& k, int mu, double tol) {
    check_dim(k.d);
    if (mu < 0 || mu >= k.d) throw DomainError("interpolate_101: direction index out of range");
    TestKernel101 out;
    out.d = k.d;
    out.support_radius = k.support_radius;
    out.name = k.name + "^" + std::to_string(mu);
    const auto g = k.g;
    const int d = k.d;
    const double R = k.support_radius;
    out.g = [g, d, R, mu, tol](const Point& w) {
        const double r = norm2(w, d);
        if (r == 0.0 || r >= R) return 0.0;
        Point dir{};
        for (int i = 0; i < d; ++i) dir[i] = w[i] / r;
        auto f = [&](double v) {
            Point q{};
            for (int i = 0; i < d; ++i) q[i] = v * dir[i];
            return std::pow(v, d - 1) * g(q);
        };
        const double I = quad::integrate_adaptive(f, r, R, opts(tol)).value;
        return dir[mu] * I / std::pow(r, d - 1);
    };
    return out;
}

double localize_012(const TestKernel012& k, double tol) {
    check_dim(k.d);
    const int d = k.d;
    // Pack (w1, w2) into one 2d-dimensional box; only d = 1 fits in a Point directly.
    if (d == 1)
        return square_polar([&](double a, double b) { return k.f(Point{a, 0, 0}, Point{b, 0, 0}); }, k.support_radius,
                            tol);
    return integrate_box(
        [&](const Point& w1) {
            return integrate_box([&](const Point& w2) { return k.f(w1, w2); }, d, k.support_radius,
                                 tol / std::pow(2.0 * k.support_radius, d));
        },
        d, k.support_radius, tol);
}

TestKernel012 interpolate_012(const TestKernel012& k, Slot which, int mu, double tol) {
    check_dim(k.d);
    if (mu < 0 || mu >= k.d) throw DomainError("interpolate_012: direction index out of range");
    TestKernel012 out;
    out.d = k.d;
    out.support_radius = k.support_radius;
    out.name = k.name + (which == Slot::first ? "^(1,0)" : "^(0,1)") + std::to_string(mu);
    const auto f = k.f;
    const int d = k.d;
    const double R = k.support_radius;
    out.f = [f, d, R, mu, which, tol](const Point& w1, const Point& w2) {
        const double lead = which == Slot::first ? w1[mu] : w2[mu];
        const double m = std::max(maxnorm(w1, d), maxnorm(w2, d));
        if (lead == 0.0 || m >= R) return 0.0;
        const double U = R / m;
        auto integrand = [&](double u) {
            Point a{}, b{};
            for (int i = 0; i < d; ++i) {
                a[i] = u * w1[i];
                b[i] = u * w2[i];
            }
            return std::pow(u, 2 * d - 1) * f(a, b);
        };
        quad::Options o = opts(tol / std::fabs(lead));
        o.max_panels = 20000;
        return lead * quad::integrate_adaptive(integrand, 1.0, U, o).value;
    };
    return out;
}

double norm_101(const TestKernel101& k, double tol) {
    return integrate_box([&](const Point& w) { return std::fabs(k.g(w)); }, k.d, k.support_radius, tol);
}

double moment_bound_101(const TestKernel101& k, double tol) {
    const int d = k.d;
    return integrate_box([&](const Point& w) { return std::fabs(k.g(w)) * norm2(w, d); }, d, k.support_radius, tol);
}

double first_moment_101(const TestKernel101& k, int mu, double tol) {
    return integrate_box([&](const Point& w) { return k.g(w) * w[mu]; }, k.d, k.support_radius, tol);
}

namespace {

double integrate_pair(const TestKernel012& k, const std::function<double(const Point&, const Point&)>& h, double tol) {
    TestKernel012 tmp = k;
    tmp.f = h;
    return localize_012(tmp, tol);
}

}  // namespace

double norm_012(const TestKernel012& k, double tol) {
    return integrate_pair(k, [&](const Point& a, const Point& b) { return std::fabs(k.f(a, b)); }, tol);
}

double moment_bound_012(const TestKernel012& k, Slot which, double tol) {
    const int d = k.d;
    return integrate_pair(
        k,
        [&](const Point& a, const Point& b) {
            return std::fabs(k.f(a, b)) * norm2(which == Slot::first ? a : b, d);
        },
        tol);
}

double Split101::residual() const { return std::fabs(direct - local - remainder); }
double Split012::residual() const { return std::fabs(direct - local - remainder10 - remainder01); }

Split101 split_101(const TestKernel101& k, const Field& phi, const Field& psi, const Field& dpsi, double field_radius,
                   double tol) {
    check_line(k.d, "split_101");
    const double R = k.support_radius, L = field_radius;
    const double inner = tol / (4.0 * R);
    const TestKernel101 g1 = interpolate_101(k, 0, 1e-15);
    Split101 s;
    s.direct = split_line([&](double w) { return k.g(Point{w, 0, 0}) * correlate(phi, psi, w, L, inner); }, R, tol);
    s.local = localize_101(k, tol) * correlate(phi, psi, 0.0, L, inner);
    s.remainder = split_line([&](double w) { return g1.g(Point{w, 0, 0}) * correlate(phi, dpsi, w, L, inner); }, R, tol);
    return s;
}

Split012 split_012(const TestKernel012& k, const Field& J, const Field& A, const Field& dA, const Field& B,
                   const Field& dB, double field_radius, double tol) {
    check_line(k.d, "split_012");
    const double R = k.support_radius, L = field_radius;
    const double inner = tol / (16.0 * R * R);
    auto K = [&](const Field& a, const Field& b, double w1, double w2) {
        return quad::integrate_adaptive([&](double y) { return J(y) * a(y + w1) * b(y + w2); }, -L, L, opts(inner))
            .value;
    };
    auto box = [&](const std::function<double(double, double)>& h) { return square_polar(h, R, tol); };
    const TestKernel012 f10 = interpolate_012(k, Slot::first, 0, 1e-15);
    const TestKernel012 f01 = interpolate_012(k, Slot::second, 0, 1e-15);
    Split012 s;
    s.direct = box([&](double a, double b) { return k.f(Point{a, 0, 0}, Point{b, 0, 0}) * K(A, B, a, b); });
    s.local = localize_012(k, tol) * K(A, B, 0.0, 0.0);
    s.remainder10 = box([&](double a, double b) { return f10.f(Point{a, 0, 0}, Point{b, 0, 0}) * K(dA, B, a, b); });
    s.remainder01 = box([&](double a, double b) { return f01.f(Point{a, 0, 0}, Point{b, 0, 0}) * K(A, dB, a, b); });
    return s;
}

std::vector<TestKernel101> battery_101() {
    auto x = [](const Point& w) { return w[0]; };
    return {
        {1, [x](const Point& w) { return std::exp(-x(w) * x(w)); }, 9.0, "gauss"},
        {1, [x](const Point& w) { return std::exp(-4.0 * x(w) * x(w)); }, 5.0, "gauss-narrow"},
        {1, [x](const Point& w) { return std::exp(-(x(w) - 0.3) * (x(w) - 0.3)); }, 9.0, "gauss-shifted"},
        {1, [x](const Point& w) { return std::exp(-0.5 * x(w) * x(w)) * std::cos(2.0 * x(w)); }, 12.0, "gauss-modulated"},
        {1,
         [x](const Point& w) {
             const double t = 0.5 * x(w);
             const double s = t == 0.0 ? 1.0 : std::sin(t) / t;
             return s * s * s * s;
         },
         40.0, "band-limited"},
    };
}

std::vector<TestKernel012> battery_012() {
    return {
        {1, [](const Point& a, const Point& b) { return std::exp(-a[0] * a[0] - b[0] * b[0]); }, 9.0, "gauss-product"},
        {1, [](const Point& a, const Point& b) { return std::exp(-(a[0] * a[0] + b[0] * b[0] + a[0] * b[0])); }, 10.0,
         "gauss-correlated"},
        {1,
         [](const Point& a, const Point& b) {
             return std::exp(-(a[0] - 0.3) * (a[0] - 0.3) - (b[0] + 0.2) * (b[0] + 0.2));
         },
         9.0, "gauss-shifted"},
        {1,
         [](const Point& a, const Point& b) {
             return std::exp(-0.5 * (a[0] * a[0] + b[0] * b[0])) * std::cos(2.0 * a[0]);
         },
         12.0, "gauss-modulated"},
    };
}

Fields101 standard_fields_101() {
    Fields101 f;
    f.phi = [](double x) { return std::exp(-0.5 * x * x); };
    f.psi = [](double x) { return std::exp(-(x - 0.5) * (x - 0.5)) * (1.0 + x); };
    f.dpsi = [](double x) {
        const double e = std::exp(-(x - 0.5) * (x - 0.5));
        return e * (1.0 - 2.0 * (x - 0.5) * (1.0 + x));
    };
    return f;
}

Fields012 standard_fields_012() {
    Fields012 f;
    f.J = [](double x) { return std::exp(-x * x / 3.0); };
    f.A = [](double x) { return std::exp(-(x - 0.4) * (x - 0.4)); };
    f.dA = [](double x) { return -2.0 * (x - 0.4) * std::exp(-(x - 0.4) * (x - 0.4)); };
    f.B = [](double x) { return x * std::exp(-0.5 * x * x); };
    f.dB = [](double x) { return (1.0 - x * x) * std::exp(-0.5 * x * x); };
    return f;
}

}  // namespace rgfp::trim
