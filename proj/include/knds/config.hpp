#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "knds/geometry.hpp"

namespace knds {

// Flat key=value configuration with '#' comments; lists are comma separated.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    double number(const std::string& key, double fallback) const;
    int integer(const std::string& key, int fallback) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<int> integers(const std::string& key, const std::vector<int>& fallback) const;

    // Throws ConfigError naming any key outside the allowed set.
    void require_known(const std::vector<std::string>& allowed) const;

private:
    std::map<std::string, std::string> kv_;
};

// Parameter keys M, Q, a, Lambda, q, c0, K; with a suffix such as "2" for the second set.
BlackHoleParams params_from_config(const KeyValueConfig& c, const std::string& suffix = "");
std::vector<std::string> param_keys(const std::string& suffix = "");

struct RunConfig {
    std::string command;
    std::string out_dir;
    std::optional<unsigned> seed;
    KeyValueConfig values;
};

// Executes one command and writes its artifacts; returns the process exit status.
int run(const RunConfig& rc);

}  // namespace knds
