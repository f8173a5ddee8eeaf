#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ldp/config.hpp"
#include "ldp/field.hpp"

namespace ldp::cli {

enum Status : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kDivergence = 3,
  kNotConverged = 4,
};

struct RunOptions {
  /// Config file to read; ignored when config_text is set.
  std::string config_path;
  /// Inline config text (used for re-runs from an embedded configuration).
  std::optional<std::string> config_text;
  std::vector<std::string> overrides;
  std::string out_dir = "ldpkit-out";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct RunOutcome {
  int status = kOk;
  /// Human-readable summary (also written to summary.txt when the
  /// configuration validated).
  std::string summary;
  /// File names written under out_dir.
  std::vector<std::string> artifacts;
};

/// Validates the configuration, runs its experiment and writes CSV artifacts,
/// resolved.cfg and summary.txt under out_dir. Never throws for configuration
/// or numerical failures; they map to the returned status.
RunOutcome run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Text between the resolved-configuration markers of a summary.
std::string extract_resolved_config(const std::string& summary);

void list_models(std::ostream& out);

/// The model described by the [model] section, truncated if requested.
CoefficientField build_model(const config::Resolved& cfg);

}  // namespace ldp::cli
