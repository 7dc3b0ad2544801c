#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rgfp/core.hpp"
#include "rgfp/cutoff.hpp"

namespace rgfp::trees {

enum class EndpointType { Nu, Lambda, PhiSource, JSource };
const char* to_string(EndpointType t);
EndpointType parse_endpoint_type(const std::string& s);
// (0,0,2,0), (0,0,4,0), (1,0,1,0), (0,1,2,0)
KernelLabel endpoint_label(EndpointType t);

// Rooted plane tree. Node 0 is the root; it has exactly one child v0, and every other internal
// node has at least two ordered children. Leaves are the endpoints, typed in depth-first order.
struct ExpansionTree {
    std::vector<std::vector<int>> children;
    std::vector<EndpointType> types;

    int endpoints() const;
    std::vector<int> leaves() const;  // depth-first, left to right
    bool valid() const;               // branching-skeleton invariants
    // Nested arrays: an endpoint is [], an internal node is the array of its children.
    std::string shape_json() const;
    // prod over internal nodes of 1/s_v!
    double symmetry_factor() const;
};

// Number of skeletons with k endpoints (little Schroeder numbers) by recursion on the child
// sequence of v0.
std::uint64_t count_shapes(int k);

// All skeletons with exactly k endpoints (1 <= k <= 12), deterministic order, endpoints untyped
// (types left empty).
std::vector<ExpansionTree> enumerate(int k);
void for_each_shape(int k, const std::function<void(const ExpansionTree&)>& fn);

struct TypeConstraint {
    std::optional<int> phi_sources;
    std::optional<int> j_sources;
};

// psi legs left on the kernel of each node: endpoints carry l of their label, an internal node
// with s children carries sum(children) - 2(s-1). Feasible iff every non-root internal node keeps
// at least one leg and v0 at least zero.
bool typing_feasible(const ExpansionTree& typed);

// Number of feasible endpoint typings satisfying the constraint.
std::uint64_t count_typed(const ExpansionTree& tree, const TypeConstraint& c = {});

struct ConstantsOptions {
    double C0 = 1.0;
    double C_R = 1.0;
    std::optional<double> K;  // default 2 |lambda*| / eps at first order
    int label_cutoff = 20;
    double t_lo = 1.6;        // decay-fit window in t = (x/gamma)^sigma units, see stretched_window
    double t_hi = 6.3;
    // Decay constants of the scale-0 propagator; fitted when unset.
    std::optional<double> C_chi1;
    std::optional<double> C_chi2;
};

struct BoundConstants {
    double C_chi1 = 0.0;
    double C_chi2 = 0.0;
    double M_w_norm = 0.0;         // closed form
    double M_w_norm_quad = 0.0;    // quadrature cross-check
    double C_gamma = 0.0;
    double C0 = 1.0;
    double C_R = 1.0;
    double d_gamma = 0.0;
    double min_abs_dsc = 0.0;      // min |D_sc| over the scan
    std::string min_label;
    bool min_matches_reference = false;  // min |D_sc| close to min{1, d/2}
    double alpha_gamma = 0.0;      // +inf when eps = 0 or eta2 = eps
    bool alpha_infinite = false;
    double K = 0.0;
    double K_prime = 0.0;          // 4 d_gamma C_R gamma^2
    double B_prime = 0.0;          // (C0/(1-gamma^-1/12))^4 K'^2 C_gamma
    bool finite() const;
};

BoundConstants compute_constants(const ModelParams& params, const cutoff::CutoffProfile& profile,
                                 const Exponents& exps, const ConstantsOptions& opt = {});

// d_gamma = max |1 - gamma^D_sc|^-1 over the scanned labels outside the local list and (0,2,0).
struct DGammaScan {
    double d_gamma = 0.0;
    double min_abs = 0.0;
    KernelLabel argmin;
};
DGammaScan scan_d_gamma(const ModelParams& params, const Exponents& exps, int cutoff = 20);
bool in_L_prime(const KernelLabel& l);

// Right side of the tree bound for a typed tree with root label ell:
// (alpha/d)^[ell=(0,2,0)] gamma^D_sc(ell) C_gamma^-1 (gamma^(1/12)/C0)^l
//   * prod_endpoints B' (K eps)^[n_v + m_v = 0].
double tree_bound(const ExpansionTree& typed, const KernelLabel& root, const BoundConstants& c,
                  const ModelParams& params, const Exponents& exps);

// eps0 = 1 / (8 B), B = B' K.
double radius_estimate(const BoundConstants& c, const ModelParams& params);

// {"endpoints": k, "shape": [...], "types": [...], "bound": b}
std::string tree_json(const ExpansionTree& typed, double bound, int digits = 12);

}  // namespace rgfp::trees
