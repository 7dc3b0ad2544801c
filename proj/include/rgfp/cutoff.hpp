#pragma once

#include <string>

#include "rgfp/core.hpp"

namespace rgfp::cutoff {

// Radial Gevrey smooth step: chi = 1 on [0, 1/2], 0 on [1, inf), strictly decreasing in between.
// Built from m(t) = exp(-t^(-1/(s-1))) as chi(r) = m(1-u) / (m(1-u) + m(u)), u = 2r - 1.
struct CutoffProfile {
    double gevrey_s = 2.0;
    double inner_radius = 0.5;
    double outer_radius = 1.0;
    double normalization = 0.0;  // m(1-u) + m(u) at the midpoint u = 1/2
    double power = 1.0;          // 1/(s-1)

    std::string id() const;
};

CutoffProfile make_profile(double s);

double eval(const CutoffProfile& profile, double r);

// d^order chi / dr^order for order in {0, 1, 2}.
double eval_derivative(const CutoffProfile& profile, double r, int order);

// f_h(r) = chi(gamma^-h r) - chi(gamma^(-h+1) r), computed as f_0(gamma^-h r).
double eval_band(const CutoffProfile& profile, const ModelParams& params, long h, double r);

// f_0 for an explicit gamma.
double band0(const CutoffProfile& profile, double gamma, double r);

}  // namespace rgfp::cutoff
