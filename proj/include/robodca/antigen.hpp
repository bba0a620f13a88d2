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

#ifndef ROBODCA_ANTIGEN_HPP
#define ROBODCA_ANTIGEN_HPP

#include <optional>

#include "robodca/dca.hpp"

namespace robodca {

/// Planar pose in the pen frame (mm), origin at the lower-left corner,
/// heading measured counter-clockwise from +x.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

/// Wraps to [0, 2pi).
double normalize_heading(double rad);
/// Wraps to (-pi, pi].
double wrap_pi(double rad);

/// Location antigen layout: 300 mm squares, twelve 30 degree heading segments per square.
class PenGrid {
 public:
  static constexpr double kCellSize = 300.0;
  static constexpr int kSegments = 12;

  PenGrid(double width_mm, double height_mm);

  double width() const { return width_; }
  double height() const { return height_; }
  int cols() const { return cols_; }
  int rows() const { return rows_; }
  std::uint32_t total_types() const {
    return static_cast<std::uint32_t>(cols_ * rows_ * kSegments);
  }
  bool inside(double x, double y) const {
    return x >= 0.0 && x < width_ && y >= 0.0 && y < height_;
  }

 private:
  double width_;
  double height_;
  int cols_;
  int rows_;
};

/// id = (row * cols + col) * 12 + segment. Throws std::out_of_range outside the pen.
AntigenType encode(const Pose& pose, const PenGrid& grid);

/// Cell centre and segment mid-heading. Throws std::out_of_range for ids beyond the grid.
Pose decode(AntigenType type, const PenGrid& grid);

struct VelocityLimits {
  double v_max = 400.0;          // mm/s
  double theta_dot_max = 1.5;    // rad/s
};

/// Antigen copies for one emission: floor(75(1-|v/vmax|) + 1 + 25(1-|w/wmax|) + 1),
/// always in [2, 102].
int multiplicity(double v, double theta_dot, const VelocityLimits& limits);

struct AntigenBatch {
  AntigenType type;
  int count = 0;
};

/// nullopt when the pose lies outside the pen.
std::optional<AntigenBatch> emit_antigen(const Pose& pose, double v, double theta_dot,
                                         const PenGrid& grid, const VelocityLimits& limits);

}  // namespace robodca

#endif  // ROBODCA_ANTIGEN_HPP
