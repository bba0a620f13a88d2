// Copyright 2026 The robodca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ROBODCA_CONFIG_HPP
#define ROBODCA_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "robodca/dca.hpp"
#include "robodca/metrics.hpp"
#include "robodca/transducer.hpp"
#include "robodca/world.hpp"

namespace robodca {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<double> medians{15.0, 30.0, 60.0, 120.0, 240.0};
  int runs_per_median = 3;
  double duration_s = 600.0;
  double mcav_threshold = kDefaultMcavThreshold;

  int population_size = 100;
  double spread_fraction = 0.5;
  int max_antigen_per_cell = 1;
  AccumulationPolicy policy = AccumulationPolicy::kEveryCycle;
  WeightMatrix weights = WeightMatrix::defaults();

  RangeLookup lookup = RangeLookup::defaults();
  FovWindow signal_fov;
  /// Blob area to PAMP factor; when unset it is derived from the pen so the
  /// anomalous cylinder saturates PAMP at the stopping distance.
  std::optional<double> pamp_scale;

  WorldConfig world = default_world();
  double cycle_interval_s = 1.0;
  bool perfect_localization = false;
  RateWeighting weighting = RateWeighting::kPerType;

  std::uint64_t seed = 20070901;
  std::string out_dir = "out";

  /// Default pen, robot, sensors and odometry noise.
  static WorldConfig default_world();

  /// Throws ConfigError on inconsistent values.
  void validate() const;
};

/// Reads a pen description (JSON). Angles are given in degrees.
WorldConfig parse_pen(std::string_view json_text);
WorldConfig load_pen_file(const std::filesystem::path& path);

/// Reads an experiment description (JSON). A "pen_file" entry is resolved
/// relative to `base_dir`; an inline "pen" object takes precedence.
ExperimentConfig parse_config(std::string_view json_text,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved config, pen inlined; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const ExperimentConfig& config);

}  // namespace robodca

#endif  // ROBODCA_CONFIG_HPP
