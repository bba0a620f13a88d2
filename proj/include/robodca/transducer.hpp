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

#ifndef ROBODCA_TRANSDUCER_HPP
#define ROBODCA_TRANSDUCER_HPP

#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace robodca {

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

inline constexpr double kNoReturn = std::numeric_limits<double>::infinity();

/// One ranged-sensor return in the robot frame. `distance` is kNoReturn when
/// nothing lies within the sensor's maximum range.
struct RangeReading {
  double angle = 0.0;  // rad, 0 = straight ahead, positive to the left
  double distance = kNoReturn;
};

/// Piecewise-linear distance (mm) to strength map, flat beyond the last knot.
class RangeLookup {
 public:
  using Knot = std::pair<double, double>;

  /// Knots must have strictly increasing distances starting at 0 and
  /// non-increasing strengths within [0, 100].
  explicit RangeLookup(std::vector<Knot> knots);

  /// (0,100) (300,90) (600,50) (900,20) (1200,0)
  static RangeLookup defaults();

  double operator()(double distance_mm) const;

  const std::vector<Knot>& knots() const { return knots_; }
  double horizon() const { return knots_.back().first; }

 private:
  std::vector<Knot> knots_;
};

double strength_from_distance(const RangeLookup& table, double distance_mm);

struct FovWindow {
  double min_angle = -deg2rad(22.0);
  double max_angle = deg2rad(22.0);

  FovWindow() = default;
  FovWindow(double min_rad, double max_rad);

  bool contains(double angle) const { return angle >= min_angle && angle <= max_angle; }
};

/// Nearest return inside the window, kNoReturn if none.
double nearest_in_fov(std::span<const RangeReading> scan, const FovWindow& fov);

double safe_from_lrf(std::span<const RangeReading> scan, const FovWindow& fov,
                     const RangeLookup& table);
double danger_from_sonar(std::span<const RangeReading> ranges, const FovWindow& fov,
                         const RangeLookup& table);
double pamp_from_blob(double area, double scale);

}  // namespace robodca

#endif  // ROBODCA_TRANSDUCER_HPP
