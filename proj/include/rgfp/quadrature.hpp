#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace rgfp {

// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x);
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Order-fixed pairwise reduction with compensated leaves; result is independent of thread layout.
double pairwise_sum(const std::vector<double>& v);

namespace quad {

using Integrand = std::function<double(double)>;
using Point = std::array<double, 3>;

struct Result {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 0.0;
    int max_panels = 20000;
    int initial_panels = 1;
};

// Global adaptive Gauss-Kronrod (G10/K21). Panels are bisected in decreasing-error order, ties broken
// by position, so the refinement sequence is deterministic. Throws ConvergenceError (carrying the
// best estimate) when max_panels is reached.
Result integrate_adaptive(const Integrand& f, double a, double b, const Options& opt);
Result integrate_adaptive(const Integrand& f, double a, double b, double tol);

// [a, inf) through x = a + t/(1-t).
Result integrate_semi_infinite(const Integrand& f, double a, const Options& opt);

// Radial kernel: cos t (d=1), J0(t) (d=2), sin t / t (d=3).
double radial_kernel(int d, double t);
// 1/pi, 1/(2 pi), 1/(2 pi^2).
double radial_prefactor(int d);
// Surface area of the unit sphere in R^d: 2, 2 pi, 4 pi.
double sphere_area(int d);

struct RadialOptions {
    double abs_tol = 1e-13;
    int max_panels = 50000;
    // Extra power k^power multiplying f; when k_lo == 0 the integrable singularity k^(power+d-1) is
    // removed by the substitution k = t^q, q = 1/(d + power).
    double power = 0.0;
};

// c_d * Int_{k_lo}^{k_hi} f(k) k^power k^(d-1) K_d(k x) dk, i.e. the d-dimensional inverse Fourier
// transform of a radial function supported on [k_lo, k_hi]. k_hi may be +inf only for integrands
// that decay on their own; non-decaying oscillatory tails must be handled by the caller.
double radial_fourier(int d, const Integrand& f, double x, double k_lo, double k_hi,
                      const RadialOptions& opt);
double radial_fourier(int d, const Integrand& f, double x, double tol);

// Euclidean minimum spanning tree length (Prim). Stands in for the Steiner diameter.
double tree_distance(const std::vector<Point>& points, int d = 3);

struct WeightSpec {
    double cbar = 0.0;
    double gamma = 2.0;
    double sigma = 0.5;
    void validate() const;
};

struct GridSpec {
    double half_width = 10.0;
    double spacing = 1e-2;
};

struct NormResult {
    double value = 0.0;
    bool truncation_warning = false;
    double boundary_ratio = 0.0;  // max boundary sample / peak
    std::string message;
};

// Kernel of `n_points` points in R^d; the first point is pinned at the origin.
using PointKernel = std::function<double(const std::vector<Point>&)>;

// Trapezoid quadrature of |K| exp(cbar (St/gamma)^sigma) over the unpinned coordinates on the cube
// [-L, L]^(d (n_points - 1)). Scalar kernels only (no component indices).
NormResult weighted_l1_norm(const PointKernel& kernel, int n_points, int d, const WeightSpec& weight,
                            const GridSpec& grid);

}  // namespace quad
}  // namespace rgfp
