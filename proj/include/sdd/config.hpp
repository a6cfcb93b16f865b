#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sdd/integrator.hpp"

namespace sdd {

/// A config file failed to parse or validate. The message names the
/// offending key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key = value scenario description ('#' starts a comment). Unknown
/// keys are errors, so misspellings cannot silently fall back to defaults.
class ScenarioConfig {
public:
    static ScenarioConfig parse_file(const std::string& path);
    static ScenarioConfig parse_string(const std::string& text);

    /// Overrides (or adds) one key before building.
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::string& raw(const std::string& key) const;

    struct Built {
        ProblemSpec spec;
        SolverOptions opts;
        double T = 0.0;
        std::string output_path;
        std::vector<double> delta_list;
        std::vector<double> probes;
    };

    /// Validates every key and assembles the problem. Throws ConfigError
    /// naming the offending key.
    Built build() const;

    /// Normalized echo of the configuration; re-parses to an equivalent spec.
    std::string print() const;

private:
    std::map<std::string, std::string> kv_;
    std::vector<std::string> order_;  // first-seen key order for printing
};

/// Bundled presets: nicholson (the reaction-diffusion birth model with a
/// state-dependent point delay), decay (zero reaction), oracle (linear
/// constant-delay local problem).
const std::vector<std::pair<std::string, std::string>>& bundled_presets();
std::string preset_text(const std::string& name);

}  // namespace sdd
