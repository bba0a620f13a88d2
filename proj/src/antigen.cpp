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

#include "robodca/antigen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "robodca/transducer.hpp"

namespace robodca {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kSegmentWidth = kTwoPi / PenGrid::kSegments;

int whole_cells(double extent, const char* what) {
  if (!std::isfinite(extent) || extent <= 0.0) {
    throw std::invalid_argument(std::string("pen ") + what + " must be positive");
  }
  const double n = extent / PenGrid::kCellSize;
  if (n != std::floor(n)) {
    throw std::invalid_argument(std::string("pen ") + what + " must be a multiple of 300 mm");
  }
  return static_cast<int>(n);
}

}  // namespace

double normalize_heading(double rad) {
  double h = std::fmod(rad, kTwoPi);
  if (h < 0.0) h += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi.
  if (h >= kTwoPi) h = 0.0;
  return h;
}

double wrap_pi(double rad) {
  double h = normalize_heading(rad);
  return h > kPi ? h - kTwoPi : h;
}

PenGrid::PenGrid(double width_mm, double height_mm)
    : width_(width_mm),
      height_(height_mm),
      cols_(whole_cells(width_mm, "width")),
      rows_(whole_cells(height_mm, "height")) {}

AntigenType encode(const Pose& pose, const PenGrid& grid) {
  if (!grid.inside(pose.x, pose.y)) throw std::out_of_range("pose outside pen");
  const int col = static_cast<int>(pose.x / PenGrid::kCellSize);
  const int row = static_cast<int>(pose.y / PenGrid::kCellSize);
  const int seg = std::min(PenGrid::kSegments - 1,
                           static_cast<int>(normalize_heading(pose.heading) / kSegmentWidth));
  return AntigenType{static_cast<std::uint32_t>((row * grid.cols() + col) * PenGrid::kSegments + seg)};
}

Pose decode(AntigenType type, const PenGrid& grid) {
  if (type.id >= grid.total_types()) throw std::out_of_range("antigen id beyond pen grid");
  const int seg = static_cast<int>(type.id % PenGrid::kSegments);
  const int cell = static_cast<int>(type.id / PenGrid::kSegments);
  const int col = cell % grid.cols();
  const int row = cell / grid.cols();
  return Pose{(col + 0.5) * PenGrid::kCellSize, (row + 0.5) * PenGrid::kCellSize,
              (seg + 0.5) * kSegmentWidth};
}

int multiplicity(double v, double theta_dot, const VelocityLimits& limits) {
  if (!(limits.v_max > 0.0) || !(limits.theta_dot_max > 0.0)) {
    throw std::invalid_argument("velocity limits must be positive");
  }
  const double vf = std::abs(v / limits.v_max);
  const double wf = std::abs(theta_dot / limits.theta_dot_max);
  if (!(vf <= 1.0) || !(wf <= 1.0)) {
    throw std::invalid_argument("velocity exceeds its limit");
  }
  const double w = 75.0 * (1.0 - vf) + 1.0 + 25.0 * (1.0 - wf) + 1.0;
  // Absorb representation error so exact-integer weights are not floored down.
  return static_cast<int>(std::floor(w + 1e-9));
}

std::optional<AntigenBatch> emit_antigen(const Pose& pose, double v, double theta_dot,
                                         const PenGrid& grid, const VelocityLimits& limits) {
  const int count = multiplicity(v, theta_dot, limits);
  if (!grid.inside(pose.x, pose.y)) return std::nullopt;
  return AntigenBatch{encode(pose, grid), count};
}

}  // namespace robodca
