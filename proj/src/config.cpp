#include "knds/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "knds/errors.hpp"

namespace knds {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0;
    try {
        d = std::stod(v, &pos);
    } catch (...) {
        pos = 0;
    }
    if (pos == 0 || trim(v.substr(pos)) != "") throw ConfigError("key '" + key + "': not a number: '" + v + "'");
    return d;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    KeyValueConfig c;
    std::stringstream ss(text);
    std::string line;
    int ln = 0;
    while (std::getline(ss, line)) {
        ++ln;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(ln) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(ln) + ": empty key");
        if (c.kv_.count(key)) throw ConfigError("line " + std::to_string(ln) + ": duplicate key '" + key + "'");
        c.kv_[key] = val;
    }
    return c;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

double KeyValueConfig::number(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : to_number(key, it->second);
}

int KeyValueConfig::integer(const std::string& key, int fallback) const {
    const double d = number(key, fallback);
    if (d != static_cast<double>(static_cast<long>(d))) throw ConfigError("key '" + key + "': not an integer");
    return static_cast<int>(d);
}

std::string KeyValueConfig::text(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::vector<double> KeyValueConfig::numbers(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<double> out;
    for (const auto& s : split_list(it->second)) out.push_back(to_number(key, s));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::vector<int> KeyValueConfig::integers(const std::string& key, const std::vector<int>& fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<int> out;
    for (double d : numbers(key, {})) {
        if (d != static_cast<double>(static_cast<long>(d))) throw ConfigError("key '" + key + "': not an integer list");
        out.push_back(static_cast<int>(d));
    }
    return out;
}

void KeyValueConfig::require_known(const std::vector<std::string>& allowed) const {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : kv_)
        if (!ok.count(k)) throw ConfigError("unknown key '" + k + "'");
}

std::vector<std::string> param_keys(const std::string& suffix) {
    std::vector<std::string> out;
    for (const char* k : {"M", "Q", "a", "Lambda", "q", "c0", "K"}) out.push_back(std::string(k) + suffix);
    return out;
}

BlackHoleParams params_from_config(const KeyValueConfig& c, const std::string& suffix) {
    const BlackHoleParams d = reference_params();
    BlackHoleParams p;
    p.M = c.number("M" + suffix, d.M);
    p.Q = c.number("Q" + suffix, d.Q);
    p.a = c.number("a" + suffix, d.a);
    p.Lambda = c.number("Lambda" + suffix, d.Lambda);
    p.q = c.number("q" + suffix, d.q);
    p.c0 = c.number("c0" + suffix, d.c0);
    p.K = c.number("K" + suffix, d.K);
    return p;
}

}  // namespace knds
