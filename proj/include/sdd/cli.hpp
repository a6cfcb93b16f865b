#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sdd::cli {

/// Exit codes: 0 success, 1 check failure, 2 usage/config error, 3 divergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDiverged = 3;

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_override,
            bool print_config);

/// Suites: all | H | oracle | dissipation | holder | dependence | apriori.
/// With out_dir, each check also writes the trajectory behind its report.
int cmd_verify(const std::string& suite);
int cmd_verify(const std::string& suite, const std::string& out_dir);

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, const std::string& out_dir, int threads);

int cmd_presets(const std::optional<std::string>& out_dir);

}  // namespace sdd::cli
