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

#include "robodca/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace robodca {

namespace {

constexpr double kTimeEps = 1e-9;

}  // namespace

Label theoretical_label(const Pose& pose, const Pen& pen, const OracleParams& params) {
  const double span = params.fov.max_angle - params.fov.min_angle;
  const int steps = static_cast<int>(std::floor(span / params.ray_step + 1e-9));
  for (int k = 0; k <= steps; ++k) {
    const double a = params.fov.min_angle + k * params.ray_step;
    const RayHit hit = cast_ray(pen, pose.x, pose.y, pose.heading + a, 0.0);
    if (hit.target >= 0 && hit.distance <= params.horizon && pen.obstacles[hit.target].anomalous()) {
      return Label::kAnomalous;
    }
  }
  return Label::kNormal;
}

Label theoretical_label(AntigenType type, const Pen& pen, const PenGrid& grid,
                        const OracleParams& params) {
  return theoretical_label(decode(type, grid), pen, params);
}

TruthTable theoretical_labeling(const Pen& pen, const PenGrid& grid, const OracleParams& params) {
  std::vector<Label> labels(grid.total_types());
  for (std::uint32_t id = 0; id < grid.total_types(); ++id) {
    labels[id] = theoretical_label(AntigenType{id}, pen, grid, params);
  }
  return TruthTable(std::move(labels));
}

ErrorRates error_rates(const std::map<AntigenType, Label>& predicted, const TruthTable& truth) {
  std::size_t negatives = 0, false_pos = 0, positives = 0, false_neg = 0;
  for (const auto& [type, label] : predicted) {
    if (truth[type] == Label::kNormal) {
      ++negatives;
      if (label == Label::kAnomalous) ++false_pos;
    } else {
      ++positives;
      if (label == Label::kNormal) ++false_neg;
    }
  }
  ErrorRates r;
  r.fp_defined = negatives > 0;
  r.fn_defined = positives > 0;
  if (r.fp_defined) r.fp_rate = static_cast<double>(false_pos) / static_cast<double>(negatives);
  if (r.fn_defined) r.fn_rate = static_cast<double>(false_neg) / static_cast<double>(positives);
  return r;
}

ErrorRates error_rates(const McavTable& table, const TruthTable& truth, double threshold,
                       RateWeighting weighting) {
  if (weighting == RateWeighting::kPerType) return error_rates(classify(table, threshold), truth);

  std::uint64_t negatives = 0, false_pos = 0, positives = 0, false_neg = 0;
  for (const auto& [type, entry] : table.entries()) {
    const Label predicted = classify(entry.mcav(), threshold);
    if (truth[type] == Label::kNormal) {
      negatives += entry.total_count;
      if (predicted == Label::kAnomalous) false_pos += entry.total_count;
    } else {
      positives += entry.total_count;
      if (predicted == Label::kNormal) false_neg += entry.total_count;
    }
  }
  ErrorRates r;
  r.fp_defined = negatives > 0;
  r.fn_defined = positives > 0;
  if (r.fp_defined) r.fp_rate = static_cast<double>(false_pos) / static_cast<double>(negatives);
  if (r.fn_defined) r.fn_rate = static_cast<double>(false_neg) / static_cast<double>(positives);
  return r;
}

std::vector<ErrorRow> error_series(std::span<const TimedPresentation> log, const TruthTable& truth,
                                   const SeriesOptions& options) {
  if (!(options.interval > 0.0)) throw std::invalid_argument("series interval must be positive");
  std::size_t boundaries = 0;
  if (options.end_time) {
    boundaries = static_cast<std::size_t>(std::floor(*options.end_time / options.interval + kTimeEps));
  } else if (!log.empty()) {
    boundaries = static_cast<std::size_t>(std::ceil(log.back().t / options.interval - kTimeEps));
  }

  std::vector<ErrorRow> rows;
  rows.reserve(boundaries);
  McavTable table;
  std::size_t next = 0;
  for (std::size_t k = 1; k <= boundaries; ++k) {
    const double boundary = static_cast<double>(k) * options.interval;
    while (next < log.size() && log[next].t <= boundary + kTimeEps) {
      table.add(log[next].presentation);
      ++next;
    }
    const ErrorRates r = error_rates(table, truth, options.threshold, options.weighting);
    rows.push_back({boundary, r.fp_rate, r.fn_rate, table.size()});
  }
  return rows;
}

}  // namespace robodca
