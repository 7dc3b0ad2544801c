#include "rgfp/trees.hpp"

#include <cmath>
#include <json.hpp>
#include <limits>
#include <map>
#include <tuple>

#include "rgfp/errors.hpp"
#include "rgfp/io.hpp"
#include "rgfp/perturb.hpp"
#include "rgfp/propagator.hpp"
#include "rgfp/quadrature.hpp"

namespace rgfp::trees {

const char* to_string(EndpointType t) {
    switch (t) {
        case EndpointType::Nu: return "Nu";
        case EndpointType::Lambda: return "Lambda";
        case EndpointType::PhiSource: return "PhiSource";
        case EndpointType::JSource: return "JSource";
    }
    return "?";
}

EndpointType parse_endpoint_type(const std::string& s) {
    for (auto t : {EndpointType::Nu, EndpointType::Lambda, EndpointType::PhiSource, EndpointType::JSource})
        if (s == to_string(t)) return t;
    throw ConfigError("unknown endpoint type '" + s + "' (Nu, Lambda, PhiSource, JSource)");
}

KernelLabel endpoint_label(EndpointType t) {
    switch (t) {
        case EndpointType::Nu: return KernelLabel::make(0, 0, 2);
        case EndpointType::Lambda: return KernelLabel::make(0, 0, 4);
        case EndpointType::PhiSource: return KernelLabel::make(1, 0, 1);
        case EndpointType::JSource: return KernelLabel::make(0, 1, 2);
    }
    return {};
}

int ExpansionTree::endpoints() const { return static_cast<int>(leaves().size()); }

std::vector<int> ExpansionTree::leaves() const {
    std::vector<int> out;
    if (children.empty()) return out;
    std::vector<int> stack{0};
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v != 0 && children[v].empty()) out.push_back(v);
        for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) stack.push_back(*it);
    }
    return out;
}

bool ExpansionTree::valid() const {
    if (children.empty() || children[0].size() != 1) return false;
    std::vector<int> seen(children.size(), 0);
    std::vector<int> stack{0};
    size_t count = 0;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v < 0 || v >= static_cast<int>(children.size()) || seen[v]++) return false;
        ++count;
        if (v != 0 && children[v].size() == 1) return false;
        for (int c : children[v]) stack.push_back(c);
    }
    if (count != children.size()) return false;
    return types.empty() || types.size() == leaves().size();
}

namespace {

void shape_rec(const ExpansionTree& t, int v, std::string& out) {
    out += '[';
    for (size_t i = 0; i < t.children[v].size(); ++i) {
        if (i) out += ',';
        shape_rec(t, t.children[v][i], out);
    }
    out += ']';
}

// Subtree encodings: "L" for an endpoint, "(" + children + ")" for an internal node.
const std::vector<std::string>& shapes_memo(int k);

void compositions(int k, int parts_min, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& fn) {
    if (k == 0) {
        if (static_cast<int>(cur.size()) >= parts_min) fn(cur);
        return;
    }
    for (int j = 1; j <= k; ++j) {
        cur.push_back(j);
        compositions(k - j, parts_min, cur, fn);
        cur.pop_back();
    }
}

void product(const std::vector<int>& parts, size_t i, std::string& acc, const std::function<void(const std::string&)>& fn) {
    if (i == parts.size()) {
        fn(acc);
        return;
    }
    const size_t base = acc.size();
    for (const auto& s : shapes_memo(parts[i])) {
        acc += s;
        product(parts, i + 1, acc, fn);
        acc.resize(base);
    }
}

void subtree_shapes(int k, const std::function<void(const std::string&)>& fn) {
    if (k == 1) {
        fn("L");
        return;
    }
    std::vector<int> cur;
    compositions(k, 2, cur, [&](const std::vector<int>& parts) {
        std::string acc = "(";
        product(parts, 0, acc, [&](const std::string& s) { fn(s + ")"); });
    });
}

const std::vector<std::string>& shapes_memo(int k) {
    static std::map<int, std::vector<std::string>> memo;
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    std::vector<std::string> v;
    subtree_shapes(k, [&](const std::string& s) { v.push_back(s); });
    return memo.emplace(k, std::move(v)).first->second;
}

ExpansionTree decode(const std::string& code) {
    ExpansionTree t;
    t.children.push_back({});
    std::vector<int> stack{0};
    for (char c : code) {
        const int node = static_cast<int>(t.children.size());
        if (c == ')') {
            stack.pop_back();
            continue;
        }
        t.children.push_back({});
        t.children[stack.back()].push_back(node);
        if (c == '(') stack.push_back(node);
    }
    return t;
}

void check_k(int k) {
    if (k < 1 || k > 12) throw DomainError("number of endpoints must be in [1, 12]");
}

using Key = std::tuple<int, int, int>;  // legs, phi sources, J sources
using Table = std::map<Key, std::uint64_t>;

Table count_rec(const ExpansionTree& t, int v) {
    if (t.children[v].empty()) {
        Table leaf;
        for (auto e : {EndpointType::Nu, EndpointType::Lambda, EndpointType::PhiSource, EndpointType::JSource}) {
            const KernelLabel l = endpoint_label(e);
            leaf[{l.l, l.n, l.m}] += 1;
        }
        return leaf;
    }
    Table acc{{{0, 0, 0}, 1}};
    for (int c : t.children[v]) {
        const Table sub = count_rec(t, c);
        Table next;
        for (const auto& [ka, na] : acc)
            for (const auto& [kb, nb] : sub)
                next[{std::get<0>(ka) + std::get<0>(kb), std::get<1>(ka) + std::get<1>(kb),
                      std::get<2>(ka) + std::get<2>(kb)}] += na * nb;
        acc.swap(next);
    }
    const int s = static_cast<int>(t.children[v].size());
    const bool is_v0 = t.children[0].front() == v;
    Table out;
    for (const auto& [k, n] : acc) {
        const int legs = std::get<0>(k) - 2 * (s - 1);
        if (legs >= (is_v0 ? 0 : 1)) out[{legs, std::get<1>(k), std::get<2>(k)}] += n;
    }
    return out;
}

int legs_rec(const ExpansionTree& t, int v, const std::map<int, EndpointType>& type_of, bool& ok) {
    if (t.children[v].empty()) return endpoint_label(type_of.at(v)).l;
    int sum = 0;
    for (int c : t.children[v]) sum += legs_rec(t, c, type_of, ok);
    const int legs = sum - 2 * (static_cast<int>(t.children[v].size()) - 1);
    if (legs < (t.children[0].front() == v ? 0 : 1)) ok = false;
    return legs;
}

}  // namespace

std::string ExpansionTree::shape_json() const {
    std::string out;
    if (!children.empty()) shape_rec(*this, 0, out);
    return out;
}

double ExpansionTree::symmetry_factor() const {
    double f = 1.0;
    for (size_t v = 1; v < children.size(); ++v)
        if (!children[v].empty()) f /= std::tgamma(static_cast<double>(children[v].size()) + 1.0);
    return f;
}

std::uint64_t count_shapes(int k) {
    check_k(k);
    std::vector<std::uint64_t> a(k + 1, 0), seq(k + 1, 0);  // seq: sequences of >= 1 subtrees
    for (int n = 1; n <= k; ++n) {
        std::uint64_t two_or_more = 0;
        for (int j = 1; j < n; ++j) two_or_more += a[j] * seq[n - j];
        a[n] = n == 1 ? 1 : two_or_more;
        seq[n] = a[n] + two_or_more;
    }
    return a[k];
}

void for_each_shape(int k, const std::function<void(const ExpansionTree&)>& fn) {
    check_k(k);
    subtree_shapes(k, [&](const std::string& code) { fn(decode(code)); });
}

std::vector<ExpansionTree> enumerate(int k) {
    std::vector<ExpansionTree> out;
    out.reserve(count_shapes(k));
    for_each_shape(k, [&](const ExpansionTree& t) { out.push_back(t); });
    return out;
}

bool typing_feasible(const ExpansionTree& typed) {
    const auto lv = typed.leaves();
    if (typed.types.size() != lv.size()) throw DomainError("typing_feasible: one type per endpoint required");
    std::map<int, EndpointType> type_of;
    for (size_t i = 0; i < lv.size(); ++i) type_of[lv[i]] = typed.types[i];
    bool ok = true;
    legs_rec(typed, typed.children[0].front(), type_of, ok);
    return ok;
}

std::uint64_t count_typed(const ExpansionTree& tree, const TypeConstraint& c) {
    if (!tree.valid()) throw DomainError("count_typed: invalid tree");
    const Table t = count_rec(tree, tree.children[0].front());
    std::uint64_t n = 0;
    for (const auto& [k, v] : t) {
        if (c.phi_sources && std::get<1>(k) != *c.phi_sources) continue;
        if (c.j_sources && std::get<2>(k) != *c.j_sources) continue;
        n += v;
    }
    return n;
}

bool in_L_prime(const KernelLabel& l) {
    const bool local_triple = (l.n == 0 && l.m == 0 && (l.l == 2 || l.l == 4)) || (l.n == 1 && l.m == 0 && l.l == 1) ||
                              (l.n == 0 && l.m == 1 && l.l == 2);
    if (local_triple && l.p_norm() == 0) return false;
    if (l.n == 0 && l.m == 0 && l.l == 2 && l.p_norm() == 1) return false;
    return true;
}

DGammaScan scan_d_gamma(const ModelParams& params, const Exponents& exps, int cutoff) {
    DGammaScan s;
    s.min_abs = std::numeric_limits<double>::infinity();
    const KernelLabel excluded = KernelLabel::make(0, 2, 0);
    for (const auto& l : canonical_labels(cutoff)) {
        if (!in_L_prime(l) || l == excluded) continue;
        const double D = scaling_dimension(l, exps, params);
        const double inv = 1.0 / std::fabs(1.0 - std::pow(params.gamma, D));
        s.d_gamma = std::max(s.d_gamma, inv);
        if (std::fabs(D) < s.min_abs) {
            s.min_abs = std::fabs(D);
            s.argmin = l;
        }
    }
    return s;
}

bool BoundConstants::finite() const {
    for (double v : {C_chi1, C_chi2, M_w_norm, C_gamma, C0, C_R, d_gamma, K, K_prime, B_prime})
        if (!std::isfinite(v) || !(v > 0.0)) return false;
    return true;
}

BoundConstants compute_constants(const ModelParams& params, const cutoff::CutoffProfile& profile,
                                 const Exponents& exps, const ConstantsOptions& opt) {
    params.validate();
    BoundConstants c;
    c.C0 = opt.C0;
    c.C_R = opt.C_R;
    const double g = params.gamma;
    const double sigma = params.sigma();
    const int d = params.d;

    if (opt.C_chi1 && opt.C_chi2) {
        c.C_chi1 = *opt.C_chi1;
        c.C_chi2 = *opt.C_chi2;
    } else {
        prop::FitOptions fo;
        fo.fixed_sigma = sigma;
        const prop::Window w = prop::stretched_window(params, opt.t_lo, opt.t_hi, 0);
        const prop::DecayFit fit = prop::decay_fit(prop::ScaleBand::single(0), params, profile, w, fo);
        c.C_chi2 = fit.c;
        // The bound must hold down to x = 0, so lift C over [0, lo] as well.
        double C1 = fit.C;
        for (double x = 0.0; x < w.lo; x += fo.step)
            C1 = std::max(C1, std::fabs(prop::eval(prop::ScaleBand::single(0), params, profile, x)) *
                                  std::exp(c.C_chi2 * std::pow(x / g, sigma)));
        c.C_chi1 = C1;
    }

    const double cbar = 0.5 * c.C_chi2;
    const double Sd = quad::sphere_area(d);
    c.M_w_norm = c.C_chi1 * Sd * std::pow(g, d) * std::tgamma(d / sigma) / (sigma * std::pow(cbar, d / sigma));
    quad::Options qo;
    qo.abs_tol = 1e-13;
    qo.rel_tol = 1e-12;
    const double I = quad::integrate_semi_infinite(
                         [&](double t) { return std::pow(t, d / sigma - 1.0) * std::exp(-cbar * t); }, 0.0, qo)
                         .value;
    c.M_w_norm_quad = c.C_chi1 * Sd * std::pow(g, d) * I / sigma;
    c.C_gamma = static_cast<double>(params.N) * params.N * d * d * c.M_w_norm;

    const DGammaScan scan = scan_d_gamma(params, exps, opt.label_cutoff);
    c.d_gamma = scan.d_gamma;
    c.min_abs_dsc = scan.min_abs;
    c.min_label = scan.argmin.str();
    c.min_matches_reference = std::fabs(scan.min_abs - std::min(1.0, d / 2.0)) < 0.05;

    const double a = std::fabs(1.0 - std::pow(g, -2.0 * params.eps + 2.0 * exps.eta2));
    c.alpha_infinite = !(a > 0.0);
    c.alpha_gamma = c.alpha_infinite ? std::numeric_limits<double>::infinity() : 1.0 / a;

    if (opt.K) {
        c.K = *opt.K;
    } else {
        if (params.N == 8) throw DomainError("N=8 excluded");
        // |lambda*| / eps at first order is 2 ln(gamma) / |I_2|; inflate by 2.
        const double J = perturb::integral_J(params, profile, 0.0);
        c.K = 2.0 * 2.0 * std::log(g) / (4.0 * std::abs(params.N - 8) * J);
    }
    c.K_prime = 4.0 * c.d_gamma * c.C_R * g * g;
    c.B_prime = std::pow(c.C0 / (1.0 - std::pow(g, -1.0 / 12.0)), 4) * c.K_prime * c.K_prime * c.C_gamma;
    return c;
}

double tree_bound(const ExpansionTree& typed, const KernelLabel& root, const BoundConstants& c,
                  const ModelParams& params, const Exponents& exps) {
    if (!typed.valid() || typed.types.size() != typed.leaves().size())
        throw DomainError("tree_bound: tree must be valid and fully typed");
    int phi = 0, jsrc = 0;
    for (auto t : typed.types) {
        phi += t == EndpointType::PhiSource;
        jsrc += t == EndpointType::JSource;
    }
    if (phi != root.n || jsrc != root.m)
        throw DomainError("tree_bound: root label " + root.str() + " does not match the source endpoints");
    const bool special = root == KernelLabel::make(0, 2, 0);
    const double D = scaling_dimension(root, exps, params);
    if (!special && D >= 0.0)
        throw DomainError("tree_bound: divergent chain resummation at label " + root.str() + " (D_sc >= 0)");
    if (special && c.alpha_infinite)
        throw DomainError("tree_bound: alpha_gamma is infinite (eps = 0 or eta2 = eps) for label (0,2,0,{})");
    const double g = params.gamma;
    double b = (special ? c.alpha_gamma / c.d_gamma : 1.0) * std::pow(g, D) / c.C_gamma *
               std::pow(std::pow(g, 1.0 / 12.0) / c.C0, root.l);
    const double Keps = c.K * params.eps;
    for (auto t : typed.types) {
        const KernelLabel l = endpoint_label(t);
        b *= c.B_prime * ((l.n + l.m == 0) ? Keps : 1.0);
    }
    return b;
}

double radius_estimate(const BoundConstants& c, const ModelParams&) {
    if (!c.finite()) throw DomainError("radius_estimate: constants must be positive and finite");
    return 1.0 / (8.0 * c.B_prime * c.K);
}

std::string tree_json(const ExpansionTree& typed, double bound, int digits) {
    nlohmann::ordered_json j;
    j["endpoints"] = typed.endpoints();
    j["shape"] = nlohmann::json::parse(typed.shape_json());
    auto types = nlohmann::json::array();
    for (auto t : typed.types) types.push_back(to_string(t));
    j["types"] = types;
    j["bound"] = round_sig(bound, digits);
    return j.dump();
}

}  // namespace rgfp::trees
