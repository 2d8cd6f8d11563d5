#pragma once

// JSON experiment configuration.
//
// A config is one flat JSON object. Physical and solver parameters must be
// given explicitly; only output cadence has defaults. Unknown keys, type
// mismatches and missing keys raise ConfigError naming the key and, where it
// appears in the file, its line.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pfc3d/driver.hpp"

namespace pfc3d {

enum class Purpose { run, converge, complexity };

const char* to_string(Purpose p);

struct ExperimentConfig {
  Purpose purpose = Purpose::run;
  /// For converge/complexity, m is the first grid and (for converge) tau and
  /// n_steps are filled in per grid by the harness.
  RunConfig run;
  std::vector<int> grids;
  std::vector<std::pair<int, int>> smoothing;
  double tau_over_h = 0.0;
  double t_final = 0.0;
};

/// `origin` is used as the location prefix in error messages.
ExperimentConfig parse_config_text(const std::string& text, Purpose purpose,
                                   const std::string& origin = "<config>");
ExperimentConfig parse_config(const std::filesystem::path& path, Purpose purpose = Purpose::run);

}  // namespace pfc3d
