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


#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "robodca/transducer.hpp"

using namespace robodca;

namespace {

// Independent piecewise-linear evaluation over the five published rows.
double table_oracle(double d) {
  static const double xs[] = {0, 300, 600, 900, 1200};
  static const double ys[] = {100, 90, 50, 20, 0};
  if (d >= 1200) return 0;
  for (int i = 0; i < 4; ++i) {
    if (d <= xs[i + 1]) return ys[i] + (ys[i + 1] - ys[i]) * (d - xs[i]) / (xs[i + 1] - xs[i]);
  }
  return 0;
}

std::vector<RangeReading> uniform_scan(double half_span_deg, double distance) {
  std::vector<RangeReading> scan;
  for (int a = -static_cast<int>(half_span_deg); a <= static_cast<int>(half_span_deg); ++a) {
    scan.push_back({deg2rad(a), distance});
  }
  return scan;
}

}  // namespace

TEST_CASE("lookup knots are exact") {
  const auto t = RangeLookup::defaults();
  CHECK(strength_from_distance(t, 0) == 100.0);
  CHECK(strength_from_distance(t, 300) == 90.0);
  CHECK(strength_from_distance(t, 600) == 50.0);
  CHECK(strength_from_distance(t, 900) == 20.0);
  CHECK(strength_from_distance(t, 1200) == 0.0);
  CHECK(strength_from_distance(t, 450) == 70.0);
  CHECK(strength_from_distance(t, 5000) == 0.0);
  CHECK(strength_from_distance(t, kNoReturn) == 0.0);
  CHECK(t.horizon() == 1200.0);
}

TEST_CASE("lookup matches an independent interpolation and is monotone") {
  const auto t = RangeLookup::defaults();
  double prev = 101.0;
  for (int d = 0; d <= 2000; ++d) {
    const double s = t(d);
    CHECK(s == doctest::Approx(table_oracle(d)).epsilon(1e-12));
    CHECK(s <= prev);
    CHECK(s >= 0.0);
    CHECK(s <= 100.0);
    prev = s;
  }
}

TEST_CASE("lookup is continuous at the knots") {
  const auto t = RangeLookup::defaults();
  for (double k : {300.0, 600.0, 900.0, 1200.0}) {
    CHECK(std::abs(t(k - 1e-7) - t(k)) < 1e-5);
    CHECK(std::abs(t(k + 1e-7) - t(k)) < 1e-5);
  }
}

TEST_CASE("lookup rejections") {
  const auto t = RangeLookup::defaults();
  CHECK_THROWS_AS(t(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(t(NAN), std::invalid_argument);
  CHECK_THROWS_AS(RangeLookup({{0, 100}}), std::invalid_argument);
  CHECK_THROWS_AS(RangeLookup({{10, 100}, {20, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(RangeLookup({{0, 100}, {0, 50}}), std::invalid_argument);
  CHECK_THROWS_AS(RangeLookup({{0, 50}, {100, 60}}), std::invalid_argument);
  CHECK_THROWS_AS(RangeLookup({{0, 150}, {100, 0}}), std::invalid_argument);
}

TEST_CASE("fov window") {
  const FovWindow fov;
  CHECK(fov.contains(0.0));
  CHECK(fov.contains(deg2rad(22.0)));
  CHECK(fov.contains(-deg2rad(22.0)));
  CHECK_FALSE(fov.contains(deg2rad(22.5)));
  CHECK_THROWS_AS(FovWindow(0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(FovWindow(0.2, -0.2), std::invalid_argument);
}

TEST_CASE("safe signal from the laser") {
  const auto t = RangeLookup::defaults();
  const FovWindow fov;
  auto scan = uniform_scan(90, kNoReturn);
  CHECK(safe_from_lrf(scan, fov, t) == 0.0);

  scan[90].distance = 0.0;
  CHECK(safe_from_lrf(scan, fov, t) == 100.0);
  scan[90].distance = 900.0;
  CHECK(safe_from_lrf(scan, fov, t) == 20.0);

  auto side = uniform_scan(90, kNoReturn);
  side[90 + 45].distance = 100.0;
  CHECK(safe_from_lrf(side, fov, t) == 0.0);

  CHECK_THROWS_AS(safe_from_lrf(std::vector<RangeReading>{}, fov, t), std::invalid_argument);
}

TEST_CASE("danger signal from the sonar") {
  const auto t = RangeLookup::defaults();
  const FovWindow fov;
  std::vector<RangeReading> ring;
  for (int i = 0; i < 16; ++i) ring.push_back({deg2rad(-180 + 22.5 * i), kNoReturn});
  CHECK(danger_from_sonar(ring, fov, t) == 0.0);

  ring[8].distance = 600.0;  // 0 degrees
  CHECK(danger_from_sonar(ring, fov, t) == 50.0);

  ring[8].distance = 300.0;
  ring[0].distance = 100.0;  // behind
  CHECK(danger_from_sonar(ring, fov, t) == 90.0);

  ring[8].distance = 1500.0;
  CHECK(danger_from_sonar(ring, fov, t) == 0.0);
  CHECK_THROWS_AS(danger_from_sonar(std::vector<RangeReading>{}, fov, t), std::invalid_argument);
}

TEST_CASE("pamp from blob area") {
  CHECK(pamp_from_blob(0.0, 3.0) == 0.0);
  CHECK(pamp_from_blob(125.0, 2.0) == 100.0);
  CHECK(pamp_from_blob(12.5, 3.0) == 37.5);
  CHECK(pamp_from_blob(kNoReturn, 1.0) == 100.0);
  CHECK_THROWS_AS(pamp_from_blob(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pamp_from_blob(NAN, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pamp_from_blob(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("transducer outputs stay in range and shrinking the window never raises them") {
  const auto t = RangeLookup::defaults();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(0.0, 3000.0);
  std::uniform_real_distribution<double> half(1.0, 60.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<RangeReading> scan;
    for (int a = -90; a <= 90; ++a) scan.push_back({deg2rad(a), dist(rng)});
    const double wide = half(rng);
    const double narrow = wide * std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    const FovWindow fw(-deg2rad(wide), deg2rad(wide));
    const FovWindow fn(-deg2rad(narrow), deg2rad(narrow));
    CHECK(nearest_in_fov(scan, fn) >= nearest_in_fov(scan, fw));
    const double sw = safe_from_lrf(scan, fw, t);
    const double sn = safe_from_lrf(scan, fn, t);
    CHECK(sn <= sw);
    CHECK(sw >= 0.0);
    CHECK(sw <= 100.0);
    CHECK(danger_from_sonar(scan, fn, t) <= danger_from_sonar(scan, fw, t));
    const double p = pamp_from_blob(dist(rng), 0.1);
    CHECK(p >= 0.0);
    CHECK(p <= 100.0);
  }
}
