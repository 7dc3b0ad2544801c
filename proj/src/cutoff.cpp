#include "rgfp/cutoff.hpp"

#include <cmath>
#include <sstream>

#include "rgfp/errors.hpp"

namespace rgfp::cutoff {

std::string CutoffProfile::id() const {
    std::ostringstream os;
    os << "gevrey-step(s=" << gevrey_s << ")";
    return os.str();
}

CutoffProfile make_profile(double s) {
    if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("invalid Gevrey order: s must be > 1");
    CutoffProfile p;
    p.gevrey_s = s;
    p.power = 1.0 / (s - 1.0);
    p.normalization = 2.0 * std::exp(-std::pow(0.5, -p.power));
    return p;
}

namespace {

// chi = 1 / (1 + e^g) with g(u) = (1-u)^-p - u^-p; returns g and its u-derivatives.
struct StepPhase {
    double g, g1, g2;
};

StepPhase phase(double p, double u) {
    const double a = 1.0 - u;
    StepPhase s;
    s.g = std::pow(a, -p) - std::pow(u, -p);
    s.g1 = p * (std::pow(a, -p - 1.0) + std::pow(u, -p - 1.0));
    s.g2 = p * (p + 1.0) * (std::pow(a, -p - 2.0) - std::pow(u, -p - 2.0));
    return s;
}

double logistic(double g) {
    if (g > 0) {
        const double e = std::exp(-g);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(g));
}

}  // namespace

double eval(const CutoffProfile& profile, double r) {
    if (r <= profile.inner_radius) return 1.0;
    if (r >= profile.outer_radius) return 0.0;
    const double u = 2.0 * r - 1.0;
    const double p = profile.power;
    return logistic(std::pow(1.0 - u, -p) - std::pow(u, -p));
}

double eval_derivative(const CutoffProfile& profile, double r, int order) {
    if (order == 0) return eval(profile, r);
    if (order < 0 || order > 2) throw DomainError("cutoff derivative order must be 0, 1 or 2");
    if (r <= profile.inner_radius || r >= profile.outer_radius) return 0.0;
    const double u = 2.0 * r - 1.0;
    const StepPhase s = phase(profile.power, u);
    const double chi = logistic(s.g);
    const double c = 0.5 / std::cosh(0.5 * s.g);
    const double w = c * c;  // chi (1 - chi)
    if (w == 0.0) return 0.0;
    // chi_u = -w g',  chi_uu = (1 - 2chi) w g'^2 - w g''; du/dr = 2
    if (order == 1) return -2.0 * w * s.g1;
    return 4.0 * ((1.0 - 2.0 * chi) * w * s.g1 * s.g1 - w * s.g2);
}

double band0(const CutoffProfile& profile, double gamma, double r) {
    return eval(profile, r) - eval(profile, gamma * r);
}

double eval_band(const CutoffProfile& profile, const ModelParams& params, long h, double r) {
    const double scaled = h == 0 ? r : r * std::pow(params.gamma, -static_cast<double>(h));
    return band0(profile, params.gamma, scaled);
}

}  // namespace rgfp::cutoff
