#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rgfp/quadrature.hpp"

namespace rgfp::trim {

using quad::Point;

// Translation-invariant kernel G(x, z) = g(z - x), negligible outside |z - x| <= support_radius.
struct TestKernel101 {
    int d = 1;
    std::function<double(const Point&)> g;
    double support_radius = 10.0;
    std::string name;

    double G(const Point& x, const Point& z) const;
};

// F(y, z1, z2) = f(z1 - y, z2 - y).
struct TestKernel012 {
    int d = 1;
    std::function<double(const Point&, const Point&)> f;
    double support_radius = 10.0;
    std::string name;

    double F(const Point& y, const Point& z1, const Point& z2) const;
};

enum class Slot { first, second };  // (1,0) and (0,1)

// Int f over [-R, R]^d, nested adaptive quadrature split at the origin (d <= 3).
double integrate_box(const std::function<double(const Point&)>& f, int d, double R, double tol);

// Ghat(0) = Int G(0, z) dz.
double localize_101(const TestKernel101& k, double tol = 1e-12);

// G^mu(x, z) = Int_0^1 ds s^(-d-1) G(x, x + (z-x)/s) (z-x)_mu. With u = 1/s and v = u|w|, w = z - x:
// (w_mu / |w|^d) Int_{|w|}^{R} v^(d-1) g(v w/|w|) dv, truncated at the support radius.
TestKernel101 interpolate_101(const TestKernel101& k, int mu, double tol = 1e-14);

// Int F(0, z1, z2) dz1 dz2.
double localize_012(const TestKernel012& k, double tol = 1e-12);

// F^(1,0)(y, z) = (z1-y)_mu Int_0^1 ds s^(-2d-1) F(y, y + (z1-y)/s, y + (z2-y)/s), i.e.
// w1_mu Int_1^U u^(2d-1) f(u w1, u w2) du with U = R / max(|w1|, |w2|); (0,1) analogously.
TestKernel012 interpolate_012(const TestKernel012& k, Slot which, int mu, double tol = 1e-14);

// Unweighted norms with the first point pinned.
double norm_101(const TestKernel101& k, double tol = 1e-11);
double norm_012(const TestKernel012& k, double tol = 1e-11);
// Int |g(w)| |w| dw: the bound for the interpolated kernel.
double moment_bound_101(const TestKernel101& k, double tol = 1e-11);
// Int |f(w1, w2)| |w_slot| dw.
double moment_bound_012(const TestKernel012& k, Slot which, double tol = 1e-11);
// Int g(w) w_mu dw.
double first_moment_101(const TestKernel101& k, int mu, double tol = 1e-12);

// Test fields on the line for the identity checks (d = 1 only).
using Field = std::function<double(double)>;

struct Split101 {
    double direct = 0.0;     // Int phi(x) G(x, z) psi(z)
    double local = 0.0;      // Ghat(0) Int phi psi
    double remainder = 0.0;  // Int phi(x) G^1(x, z) psi'(z)
    double residual() const;
};

// Uses translation invariance: each term is Int dw kernel(w) K(w) with K(w) = Int phi(x) chi(x + w) dx.
Split101 split_101(const TestKernel101& k, const Field& phi, const Field& psi, const Field& dpsi,
                   double field_radius, double tol = 1e-12);

struct Split012 {
    double direct = 0.0;
    double local = 0.0;
    double remainder10 = 0.0;
    double remainder01 = 0.0;
    double residual() const;
};

Split012 split_012(const TestKernel012& k, const Field& J, const Field& A, const Field& dA, const Field& B,
                   const Field& dB, double field_radius, double tol = 1e-11);

// Kernel battery on the line: Gaussians, a shifted Gaussian, a modulated Gaussian and the
// band-limited kernel (sin(w/2)/(w/2))^4.
std::vector<TestKernel101> battery_101();
// Product, correlated, shifted and modulated Gaussians in (w1, w2).
std::vector<TestKernel012> battery_012();

struct Fields101 {
    Field phi, psi, dpsi;
    double radius = 12.0;
};
struct Fields012 {
    Field J, A, dA, B, dB;
    double radius = 12.0;
};
Fields101 standard_fields_101();
Fields012 standard_fields_012();

}  // namespace rgfp::trim
