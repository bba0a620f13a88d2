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

#ifndef ROBODCA_METRICS_HPP
#define ROBODCA_METRICS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "robodca/antigen.hpp"
#include "robodca/dca.hpp"
#include "robodca/transducer.hpp"
#include "robodca/world.hpp"

namespace robodca {

/// Geometric ground truth: a pose is anomalous when, within the forward
/// window, the first thing some ray meets is an anomalous obstacle no
/// further than the signal horizon.
struct OracleParams {
  FovWindow fov;
  double ray_step = deg2rad(1.0);
  double horizon = 1200.0;
};

Label theoretical_label(const Pose& pose, const Pen& pen, const OracleParams& params = {});
/// Evaluates the decoded representative pose of `type`. Throws std::out_of_range on invalid ids.
Label theoretical_label(AntigenType type, const Pen& pen, const PenGrid& grid,
                        const OracleParams& params = {});

class TruthTable {
 public:
  TruthTable() = default;
  explicit TruthTable(std::vector<Label> labels) : labels_(std::move(labels)) {}

  Label operator[](AntigenType t) const { return labels_.at(t.id); }
  std::size_t size() const { return labels_.size(); }
  const std::vector<Label>& labels() const { return labels_; }

 private:
  std::vector<Label> labels_;
};

TruthTable theoretical_labeling(const Pen& pen, const PenGrid& grid,
                                const OracleParams& params = {});

enum class RateWeighting {
  kPerType,          ///< each presented type counts once
  kPerPresentation,  ///< each type counts by its presentation total
};

struct ErrorRates {
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  bool fp_defined = false;  ///< false when no presented type is truly normal
  bool fn_defined = false;  ///< false when no presented type is truly anomalous
};

/// Rates over the types present in `predicted`, per type.
ErrorRates error_rates(const std::map<AntigenType, Label>& predicted, const TruthTable& truth);

/// Classifies `table` at `threshold` and scores it with the chosen weighting.
ErrorRates error_rates(const McavTable& table, const TruthTable& truth, double threshold,
                       RateWeighting weighting = RateWeighting::kPerType);

struct TimedPresentation {
  double t = 0.0;
  Presentation presentation;
};

struct ErrorRow {
  double t = 0.0;
  double fp_rate = 0.0;
  double fn_rate = 0.0;
  std::size_t n_presented_types = 0;
};

struct SeriesOptions {
  double interval = 1.0;
  double threshold = kDefaultMcavThreshold;
  RateWeighting weighting = RateWeighting::kPerType;
  /// Last boundary to report; defaults to the first boundary at or after the final presentation.
  std::optional<double> end_time;
};

/// Cumulative error rates at every interval boundary k * interval, k >= 1.
/// Presentations stamped at or before a boundary count toward it.
std::vector<ErrorRow> error_series(std::span<const TimedPresentation> log, const TruthTable& truth,
                                   const SeriesOptions& options = {});

}  // namespace robodca

#endif  // ROBODCA_METRICS_HPP
