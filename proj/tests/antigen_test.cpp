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
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "robodca/antigen.hpp"
#include "robodca/transducer.hpp"

using namespace robodca;

namespace {

const PenGrid kGrid(4200, 3000);

// Plain evaluation of the antigen weight without any tolerance trick.
double weight_oracle(double v, double w, double vmax, double wmax) {
  return 75.0 * (1.0 - std::abs(v / vmax)) + 1.0 + 25.0 * (1.0 - std::abs(w / wmax)) + 1.0;
}

}  // namespace

TEST_CASE("grid layout") {
  CHECK(kGrid.cols() == 14);
  CHECK(kGrid.rows() == 10);
  CHECK(kGrid.total_types() == 14u * 10u * 12u);
  CHECK_THROWS_AS(PenGrid(4250, 3000), std::invalid_argument);
  CHECK_THROWS_AS(PenGrid(0, 3000), std::invalid_argument);
}

TEST_CASE("heading wrapping") {
  CHECK(normalize_heading(-0.5) == doctest::Approx(2 * kPi - 0.5));
  CHECK(normalize_heading(2 * kPi) == 0.0);
  CHECK(normalize_heading(-1e-18) < 2 * kPi);
  CHECK(wrap_pi(kPi) == doctest::Approx(kPi));
  CHECK(wrap_pi(1.5 * kPi) == doctest::Approx(-0.5 * kPi));
}

TEST_CASE("encode examples") {
  CHECK(encode({0, 0, 0}, kGrid).id == 0);
  CHECK(encode({450, 0, 0}, kGrid).id == 12);
  CHECK(encode({0, 0, deg2rad(359)}, kGrid).id == 11);
  CHECK(encode({0, 0, deg2rad(-1)}, kGrid).id == 11);
  CHECK(encode({4199.9, 2999.9, deg2rad(45)}, kGrid).id == (9 * 14 + 13) * 12 + 1);
  CHECK(encode({150, 450, deg2rad(30)}, kGrid).id == (1 * 14 + 0) * 12 + 1);
}

TEST_CASE("encode rejects poses outside the pen") {
  CHECK_THROWS_AS(encode({-1, 10, 0}, kGrid), std::out_of_range);
  CHECK_THROWS_AS(encode({4200, 10, 0}, kGrid), std::out_of_range);
  CHECK_THROWS_AS(encode({10, 3000, 0}, kGrid), std::out_of_range);
}

TEST_CASE("decode examples") {
  const Pose p0 = decode(AntigenType{0}, kGrid);
  CHECK(p0.x == 150.0);
  CHECK(p0.y == 150.0);
  CHECK(rad2deg(p0.heading) == doctest::Approx(15.0));
  const Pose p12 = decode(AntigenType{12}, kGrid);
  CHECK(p12.x == 450.0);
  CHECK(p12.y == 150.0);
  CHECK(rad2deg(p12.heading) == doctest::Approx(15.0));
  CHECK_THROWS_AS(decode(AntigenType{kGrid.total_types()}, kGrid), std::out_of_range);
}

TEST_CASE("decode then encode is the identity on every id") {
  for (std::uint32_t id = 0; id < kGrid.total_types(); ++id) {
    CHECK(encode(decode(AntigenType{id}, kGrid), kGrid).id == id);
  }
}

TEST_CASE("encode is surjective and decode stays in the same cell and segment") {
  std::set<std::uint32_t> seen;
  for (double x = 10; x < 4200; x += 100) {
    for (double y = 10; y < 3000; y += 100) {
      for (int s = 0; s < 24; ++s) {
        const Pose p{x, y, deg2rad(7.5 + 15.0 * s)};
        const auto id = encode(p, kGrid);
        seen.insert(id.id);
        const Pose back = decode(id, kGrid);
        CHECK(std::floor(back.x / 300) == std::floor(x / 300));
        CHECK(std::floor(back.y / 300) == std::floor(y / 300));
        CHECK(std::floor(rad2deg(back.heading) / 30) == std::floor(rad2deg(p.heading) / 30));
      }
    }
  }
  CHECK(seen.size() == kGrid.total_types());
}

TEST_CASE("multiplicity examples") {
  const VelocityLimits lim;
  CHECK(multiplicity(400, 1.5, lim) == 2);
  CHECK(multiplicity(-400, -1.5, lim) == 2);
  CHECK(multiplicity(0, 0, lim) == 102);
  CHECK(multiplicity(200, 0, lim) == 64);
  CHECK_THROWS_AS(multiplicity(401, 0, lim), std::invalid_argument);
  CHECK_THROWS_AS(multiplicity(0, 1.6, lim), std::invalid_argument);
  CHECK_THROWS_AS(multiplicity(0, 0, VelocityLimits{0, 1}), std::invalid_argument);
}

TEST_CASE("multiplicity over a 101 x 101 velocity grid") {
  const VelocityLimits lim;
  for (int i = 0; i <= 100; ++i) {
    const double v = lim.v_max * i / 100.0;
    int prev_w = 103;
    for (int j = 0; j <= 100; ++j) {
      const double w = lim.theta_dot_max * j / 100.0;
      const int m = multiplicity(v, w, lim);
      CHECK(m >= 2);
      CHECK(m <= 102);
      CHECK(m <= prev_w);
      CHECK(std::abs(m - weight_oracle(v, w, lim.v_max, lim.theta_dot_max)) < 1.0 + 1e-9);
      if (i > 0) CHECK(m <= multiplicity(lim.v_max * (i - 1) / 100.0, w, lim));
      prev_w = m;
    }
  }
}

TEST_CASE("emitting antigen") {
  const VelocityLimits lim;
  auto b = emit_antigen({0, 0, 0}, 0, 0, kGrid, lim);
  REQUIRE(b);
  CHECK(b->type.id == 0);
  CHECK(b->count == 102);

  b = emit_antigen({500, 700, 1.0}, 400, 1.5, kGrid, lim);
  REQUIRE(b);
  CHECK(b->type == encode({500, 700, 1.0}, kGrid));
  CHECK(b->count == 2);

  CHECK_FALSE(emit_antigen({-10, 700, 1.0}, 0, 0, kGrid, lim));
  CHECK_THROWS_AS(emit_antigen({10, 10, 0}, 500, 0, kGrid, lim), std::invalid_argument);
}
