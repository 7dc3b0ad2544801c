#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <sstream>

#include "rgfp/errors.hpp"
#include "rgfp/io.hpp"

namespace rgfp::cli {

const std::vector<std::pair<std::string, std::string>>& RunConfig::defaults() {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"model.d", "1"},
        {"model.N", "4"},
        {"model.eps", "0.001"},
        {"model.gamma", "2"},
        {"model.s", "2"},
        {"model.eps_guard", "0.05"},
        {"quadrature.tol", "1e-13"},
        {"quadrature.max_panels", "50000"},
        {"quadrature.grid_density", "32"},
        {"windows.band", "single:0"},
        {"windows.x_min", "0.5"},
        {"windows.x_max", "50"},
        {"windows.h_min", "auto"},
        {"windows.h_max", "auto"},
        {"windows.fit_lo", "8"},
        {"windows.fit_hi", "500"},
        {"windows.fit_target", "band"},
        {"windows.response", "G"},
        {"windows.max_endpoints", "8"},
        {"windows.constraint", "none"},
        {"windows.root_label", "0,0,2,1,1"},
        {"windows.endpoint_type", "Lambda"},
        {"output.format", "default"},
        {"output.path", "-"},
        {"output.json_precision", "12"},
        {"output.csv_precision", "9"},
        {"output.stream", "false"},
    };
    return table;
}

bool RunConfig::known(const std::string& key) {
    for (const auto& [k, v] : defaults())
        if (k == key) return true;
    return false;
}

RunConfig::RunConfig() {
    for (const auto& [k, v] : defaults()) values_[k] = v;
}

namespace {

bool is_real_key(const std::string& k) {
    static const char* keys[] = {"model.eps",     "model.gamma",   "model.s",        "model.eps_guard", "quadrature.tol",
                                 "windows.x_min", "windows.x_max", "windows.fit_lo", "windows.fit_hi"};
    for (const char* c : keys)
        if (k == c) return true;
    return false;
}

bool is_integer_key(const std::string& k) {
    static const char* keys[] = {"model.d",         "model.N",         "quadrature.max_panels", "quadrature.grid_density",
                                 "windows.h_min",   "windows.h_max",   "windows.max_endpoints", "output.json_precision",
                                 "output.csv_precision"};
    for (const char* c : keys)
        if (k == c) return true;
    return false;
}

// Shortest round-trip spelling, so "1e-3" and "0.001" hash alike. Unparsable text is kept and
// reported by validate().
std::string canonical(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        if (is_real_key(key)) {
            const double v = std::stod(value, &used);
            if (used != value.size()) return value;
            char buf[64];
            auto res = std::to_chars(buf, buf + sizeof buf, v);
            return std::string(buf, res.ptr);
        }
        if (is_integer_key(key)) {
            const long v = std::stol(value, &used);
            if (used != value.size()) return value;
            return std::to_string(v);
        }
    } catch (const std::exception&) {
    }
    return value;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!known(key)) throw ConfigError("unknown configuration key '" + key + "'");
    values_[key] = canonical(key, value);
}

const std::string& RunConfig::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown configuration key '" + key + "'");
    return it->second;
}

void RunConfig::load_file(const std::string& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("cannot read config file: " + std::string(e.what()));
    }
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("key '" + section + "' outside a [section]");
        for (const auto& [key, node] : body) set(section + "." + key, node.get_value<std::string>());
    }
}

double RunConfig::get_double(const std::string& key) const {
    const std::string& s = get(key);
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects a number, got '" + s + "'");
    }
}

long RunConfig::get_long(const std::string& key) const {
    const std::string& s = get(key);
    try {
        size_t used = 0;
        const long v = std::stol(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("'" + key + "' expects an integer, got '" + s + "'");
    }
}

bool RunConfig::get_bool(const std::string& key) const {
    const std::string& s = get(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + s + "'");
}

ModelParams RunConfig::model() const {
    ModelParams p;
    p.d = static_cast<int>(get_long("model.d"));
    p.N = static_cast<int>(get_long("model.N"));
    p.eps = get_double("model.eps");
    p.gamma = get_double("model.gamma");
    p.gevrey_s = get_double("model.s");
    p.eps_guard = get_double("model.eps_guard");
    p.validate();
    return p;
}

void RunConfig::validate() const {
    model();
    if (!(get_double("quadrature.tol") > 0.0)) throw ConfigError("quadrature.tol must be positive");
    if (get_long("quadrature.max_panels") < 1) throw ConfigError("quadrature.max_panels must be positive");
    if (get_long("quadrature.grid_density") < 1) throw ConfigError("quadrature.grid_density must be positive");
    const double x0 = get_double("windows.x_min"), x1 = get_double("windows.x_max");
    if (!(x0 > 0.0 && x1 >= x0)) throw ConfigError("windows: need 0 < x_min <= x_max");
    const double f0 = get_double("windows.fit_lo"), f1 = get_double("windows.fit_hi");
    if (!(f0 > 0.0 && f1 > f0)) throw ConfigError("windows: need 0 < fit_lo < fit_hi");
    const bool ha = get("windows.h_min") == "auto", hb = get("windows.h_max") == "auto";
    if (ha != hb) throw ConfigError("windows: h_min and h_max must both be set or both be auto");
    if (!ha && get_long("windows.h_min") > get_long("windows.h_max"))
        throw ConfigError("windows: h_min must not exceed h_max");
    const long k = get_long("windows.max_endpoints");
    if (k < 1 || k > 12) throw ConfigError("windows.max_endpoints must be in [1, 12]");
    const std::string& c = get("windows.constraint");
    if (c != "none" && c != "two-phi" && c != "two-J") throw ConfigError("windows.constraint: none, two-phi or two-J");
    const std::string& t = get("windows.fit_target");
    if (t != "band" && t != "E1") throw ConfigError("windows.fit_target: band or E1");
    const std::string& f = get("output.format");
    if (f != "default" && f != "json" && f != "csv") throw ConfigError("output.format: default, json or csv");
    const long jp = get_long("output.json_precision"), cp = get_long("output.csv_precision");
    if (jp < 1 || jp > 17 || cp < 1 || cp > 17) throw ConfigError("output precision must be in [1, 17]");
    get_bool("output.stream");
}

std::string RunConfig::dump() const {
    std::ostringstream os;
    std::string section;
    for (const auto& [k, def] : defaults()) {
        const auto dot = k.find('.');
        const std::string sec = k.substr(0, dot);
        if (sec != section) {
            if (!section.empty()) os << "\n";
            os << "[" << sec << "]\n";
            section = sec;
        }
        os << k.substr(dot + 1) << " = " << values_.at(k) << "\n";
    }
    return os.str();
}

std::string RunConfig::hash() const {
    // The destination does not change the result.
    RunConfig c = *this;
    c.values_["output.path"] = "-";
    return fnv1a_hex(c.dump());
}

}  // namespace rgfp::cli
