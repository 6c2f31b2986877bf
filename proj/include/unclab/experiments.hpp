#ifndef UNCLAB_EXPERIMENTS_HPP
#define UNCLAB_EXPERIMENTS_HPP

/**
 * Configuration-driven experiment runner: parses a JSON config, dispatches
 * to one of the eight experiments, and emits CSV tables (always), a JSON
 * metadata sidecar per table, and SVG line charts (when plotting is on).
 * All artifacts are staged and renamed into place together, so a failed run
 * leaves no partial outputs.
 *
 * Exit codes: 0 ok, 2 config parse/validation, 3 numerical failure, 4 I/O.
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace unclab {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitIo = 4;

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
  bool force_plot = false;
  std::optional<int> threads_override;  // 0 = auto
};

/// Runs the experiment described by the config file. Returns an exit code;
/// diagnostics go to stderr.
int run_experiment(const std::filesystem::path& config_path, const RunOptions& options = {});

}  // namespace unclab

#endif  // UNCLAB_EXPERIMENTS_HPP
