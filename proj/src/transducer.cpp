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

#include "robodca/transducer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robodca {

RangeLookup::RangeLookup(std::vector<Knot> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 2) throw std::invalid_argument("lookup table needs at least two knots");
  if (knots_.front().first != 0.0) throw std::invalid_argument("lookup table must start at 0 mm");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const auto [d, s] = knots_[i];
    if (!std::isfinite(d) || !std::isfinite(s) || s < 0.0 || s > 100.0) {
      throw std::invalid_argument("lookup knots must be finite with strength in [0, 100]");
    }
    if (i > 0) {
      if (!(d > knots_[i - 1].first)) {
        throw std::invalid_argument("lookup distances must be strictly increasing");
      }
      if (s > knots_[i - 1].second) {
        throw std::invalid_argument("lookup strengths must be non-increasing");
      }
    }
  }
}

RangeLookup RangeLookup::defaults() {
  return RangeLookup({{0.0, 100.0}, {300.0, 90.0}, {600.0, 50.0}, {900.0, 20.0}, {1200.0, 0.0}});
}

double RangeLookup::operator()(double d) const {
  if (std::isnan(d) || d < 0.0) throw std::invalid_argument("distance must be non-negative");
  if (d >= knots_.back().first) return knots_.back().second;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), d,
                             [](double v, const Knot& k) { return v < k.first; });
  auto lo = std::prev(hi);
  if (d == lo->first) return lo->second;
  const double f = (d - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

double strength_from_distance(const RangeLookup& table, double distance_mm) {
  return table(distance_mm);
}

FovWindow::FovWindow(double min_rad, double max_rad) : min_angle(min_rad), max_angle(max_rad) {
  if (!(min_rad < max_rad)) throw std::invalid_argument("FOV min angle must be below max angle");
}

double nearest_in_fov(std::span<const RangeReading> scan, const FovWindow& fov) {
  if (scan.empty()) throw std::invalid_argument("empty range scan");
  double nearest = kNoReturn;
  for (const auto& r : scan) {
    if (fov.contains(r.angle) && r.distance < nearest) nearest = r.distance;
  }
  return nearest;
}

double safe_from_lrf(std::span<const RangeReading> scan, const FovWindow& fov,
                     const RangeLookup& table) {
  const double d = nearest_in_fov(scan, fov);
  return std::isinf(d) ? 0.0 : table(d);
}

double danger_from_sonar(std::span<const RangeReading> ranges, const FovWindow& fov,
                         const RangeLookup& table) {
  const double d = nearest_in_fov(ranges, fov);
  return std::isinf(d) ? 0.0 : table(d);
}

double pamp_from_blob(double area, double scale) {
  if (std::isnan(area) || area < 0.0) throw std::invalid_argument("blob area must be non-negative");
  if (!(scale > 0.0)) throw std::invalid_argument("PAMP scale must be positive");
  if (std::isinf(area)) return 100.0;
  return std::min(100.0, area * scale);
}

}  // namespace robodca
