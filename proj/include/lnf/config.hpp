#pragma once

// JSON run configuration for the command-line front end.
// See docs/config_schema.md for the document layout.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lnf/fitting.hpp"
#include "lnf/ladder.hpp"

namespace lnf {

struct GridSpec {
  double start_hz = 0.0;
  double stop_hz = 0.0;
  std::size_t points = 0;

  FrequencyGrid make() const { return FrequencyGrid::linspace(start_hz, stop_hz, points); }
};

// Default simulation grid: 2001 points over 3.5-5.5 GHz.
GridSpec default_grid();

// "start,stop,n"; throws ConfigError on malformed text or a non-increasing
// range.
GridSpec parse_grid_arg(const std::string& text);

enum class Weighting { Uniform, Passband };

struct FitJob {
  std::vector<std::string> free;
  Bounds bounds;
  FitOptions options;
  Weighting weighting = Weighting::Uniform;
};

struct RunConfig {
  std::optional<LadderDesign> design;
  std::optional<GridSpec> grid;
  std::optional<std::string> output_prefix;
  std::optional<FitJob> fit;
};

// Validates the whole document before returning. Every problem found is
// listed in the ConfigError message, one per line, prefixed by its JSON
// path. Unknown keys are errors.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Preset by name ("A" or "B", case-insensitive).
LadderDesign design_by_name(const std::string& name);

}  // namespace lnf
