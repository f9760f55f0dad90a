#pragma once

// Flat `section.key = value` configuration files.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace spherent::cli {

/// Malformed or inconsistent configuration; maps to exit status 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Config {
public:
    /// Lines are `key = value`; `#` starts a comment; blank lines are ignored.
    /// Duplicate keys are an error.
    static Config parse(const std::string& text, const std::string& source = "<config>");
    static Config load(const std::string& path);

    [[nodiscard]] bool has(const std::string& key) const;

    [[nodiscard]] std::string get_string(const std::string& key) const;
    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    /// Accepts plain numbers and pi, pi/2, 0.5*pi, 2pi style angles.
    [[nodiscard]] double get_double(const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] std::optional<double> find_double(const std::string& key) const;
    [[nodiscard]] int get_int(const std::string& key) const;
    [[nodiscard]] int get_int(const std::string& key, int fallback) const;

    /// Throws ConfigError naming the first key that was never read.
    void reject_unused() const;

    /// "source:line: " prefix for messages about a key.
    [[nodiscard]] std::string where(const std::string& key) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    const Entry& entry(const std::string& key) const;

    std::string source_;
    std::map<std::string, Entry> entries_;
    mutable std::set<std::string> used_;
};

/// Number parser shared with the angle syntax above; throws std::invalid_argument.
double parse_number(const std::string& text);

}  // namespace spherent::cli
