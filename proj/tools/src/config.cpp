#include "config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace spherent::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double strict_double(const std::string& s) {
    if (s.empty()) {
        throw std::invalid_argument("empty number");
    }
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        throw std::invalid_argument("not a finite number: '" + s + "'");
    }
    return v;
}

bool valid_key(const std::string& k) {
    if (k.empty() || k.front() == '.' || k.back() == '.') {
        return false;
    }
    for (char c : k) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) {
            return false;
        }
    }
    return true;
}

}  // namespace

double parse_number(const std::string& raw) {
    const std::string s = trim(raw);
    const auto pos = s.find("pi");
    if (pos == std::string::npos) {
        return strict_double(s);
    }
    // [<factor>[*]]pi[/<divisor>]
    std::string head = trim(s.substr(0, pos));
    const std::string tail = trim(s.substr(pos + 2));
    if (!head.empty() && head.back() == '*') {
        head = trim(head.substr(0, head.size() - 1));
    }
    double v = std::numbers::pi;
    if (!head.empty()) {
        v *= (head == "-") ? -1.0 : strict_double(head);
    }
    if (!tail.empty()) {
        if (tail.front() != '/') {
            throw std::invalid_argument("bad angle: '" + s + "'");
        }
        v /= strict_double(trim(tail.substr(1)));
    }
    return v;
}

Config Config::parse(const std::string& text, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        const std::string at = source + ":" + std::to_string(number) + ": ";
        if (eq == std::string::npos) {
            throw ConfigError(at + "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key)) {
            throw ConfigError(at + "invalid key '" + key + "'");
        }
        if (value.empty()) {
            throw ConfigError(at + "missing value for '" + key + "'");
        }
        const auto [it, fresh] = cfg.entries_.emplace(key, Entry{value, number});
        if (!fresh) {
            throw ConfigError(at + "duplicate key '" + key + "' (first set on line " +
                              std::to_string(it->second.line) + ")");
        }
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

const Config::Entry& Config::entry(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ConfigError(source_ + ": missing required key '" + key + "'");
    }
    used_.insert(key);
    return it->second;
}

std::string Config::where(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return source_ + ": ";
    }
    return source_ + ":" + std::to_string(it->second.line) + ": ";
}

std::string Config::get_string(const std::string& key) const { return entry(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
    const Entry& e = entry(key);
    try {
        return parse_number(e.value);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(where(key) + key + ": " + ex.what());
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::optional<double> Config::find_double(const std::string& key) const {
    if (!has(key)) {
        return std::nullopt;
    }
    return get_double(key);
}

int Config::get_int(const std::string& key) const {
    const Entry& e = entry(key);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(e.value.c_str(), &end, 10);
    if (end != e.value.c_str() + e.value.size() || errno == ERANGE || v < -1000000000L || v > 1000000000L) {
        throw ConfigError(where(key) + key + ": not an integer: '" + e.value + "'");
    }
    return static_cast<int>(v);
}

int Config::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

void Config::reject_unused() const {
    for (const auto& [key, e] : entries_) {
        if (used_.count(key) == 0) {
            throw ConfigError(source_ + ":" + std::to_string(e.line) + ": unknown or unused key '" + key + "'");
        }
    }
}

}  // namespace spherent::cli
