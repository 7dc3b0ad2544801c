#pragma once

#include <map>
#include <string>
#include <vector>

#include "rgfp/core.hpp"

namespace rgfp::cli {

// Effective configuration as "section.key" -> text. Every key has a default; unknown keys are
// rejected both from files and from flags.
class RunConfig {
public:
    RunConfig();

    static const std::vector<std::pair<std::string, std::string>>& defaults();
    static bool known(const std::string& key);

    void set(const std::string& key, const std::string& value);
    const std::string& get(const std::string& key) const;

    // INI file: [section] headers, key = value lines, ';' or '#' comments.
    void load_file(const std::string& path);

    double get_double(const std::string& key) const;
    long get_long(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    ModelParams model() const;
    // Throws ConfigError for invalid model or window values.
    void validate() const;

    // Canonical text: sections in fixed order, keys in declaration order.
    std::string dump() const;
    std::string hash() const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace rgfp::cli
