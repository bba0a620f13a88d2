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

/*
 * world.hpp
 *
 * Planar simulation of a rectangular test pen with cylindrical obstacles, a
 * differential-drive robot running a two-layer subsumption wander behaviour,
 * and its three sensors:
 *   - a planar laser that only sees geometry at least 330 mm tall,
 *   - a 16-transducer sonar ring with conic beams that sees everything,
 *   - a colour camera reporting the apparent area of the largest pink blob.
 * Odometry integrates the executed wheel velocities with multiplicative
 * speed noise and additive turn-rate noise, so it drifts from the truth.
 */

#ifndef ROBODCA_WORLD_HPP
#define ROBODCA_WORLD_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "robodca/antigen.hpp"
#include "robodca/transducer.hpp"

namespace robodca {

/// Objects below this height are invisible to the laser and count as anomalous when pink.
inline constexpr double kAnomalyHeight = 330.0;

struct Obstacle {
  double x = 0.0;
  double y = 0.0;
  double radius = 100.0;
  double height = 500.0;
  bool pink = false;

  bool anomalous() const { return pink && height < kAnomalyHeight; }
};

/// Rectangular pen [0, width] x [0, height]; walls are non-pink and wall_height tall.
struct Pen {
  double width = 4200.0;
  double height = 3000.0;
  double wall_height = 500.0;
  std::vector<Obstacle> obstacles;

  /// 4200 x 3000 mm with short pink cylinder A at (3000, 2200) and tall pink
  /// cylinder B at (1200, 800).
  static Pen defaults();

  /// Throws std::invalid_argument on obstacles outside the pen or overlapping.
  void validate() const;

  /// Distance from (x, y) to the nearest wall or obstacle surface (negative inside an obstacle).
  double clearance(double x, double y) const;
};

inline constexpr int kHitWall = -1;
inline constexpr int kHitNothing = -2;

struct RayHit {
  double distance = kNoReturn;
  int target = kHitNothing;  ///< obstacle index, kHitWall or kHitNothing
};

/// Nearest intersection along a ray with any wall or obstacle at least
/// min_height tall. Obstacle `skip` is ignored. An origin inside an obstacle
/// hits it at distance 0.
RayHit cast_ray(const Pen& pen, double x, double y, double angle, double min_height,
                int skip = kHitNothing);

/// Distance only, kNoReturn when nothing is hit.
double raycast(const Pen& pen, double x, double y, double angle, double min_height);

struct LaserParams {
  double half_span = deg2rad(90.0);
  double resolution = deg2rad(1.0);
  double max_range = 8000.0;
  double min_visible_height = kAnomalyHeight;
};

struct SonarParams {
  int transducers = 16;
  double cone_half_angle = deg2rad(15.0);
  int rays_per_cone = 7;
  double max_range = 5000.0;
  double min_visible_height = 0.0;
};

struct CameraParams {
  double half_fov = deg2rad(30.0);
  double gain = 1.0;
  /// Blobs with a smaller apparent area are not detected.
  double min_area = 0.0;
};

struct SensorSuite {
  LaserParams lrf;
  SonarParams sonar;
  CameraParams camera;
  double range_noise_sigma = 0.0;   ///< mm, additive on every ranged return
  double blob_noise_fraction = 0.0; ///< relative, multiplicative on blob area
};

std::vector<RangeReading> lrf_scan(const Pen& pen, const Pose& pose, const LaserParams& p);
std::vector<RangeReading> sonar_scan(const Pen& pen, const Pose& pose, const SonarParams& p);
/// Largest apparent area gain * 2rh / d^2 over unoccluded pink obstacles in view,
/// 0 when that is below the detection floor.
double camera_blob(const Pen& pen, const Pose& pose, const CameraParams& p);

struct RobotParams {
  double v_max = 400.0;
  double v_cruise = 300.0;
  double theta_dot_max = 1.5;
  double body_radius = 220.0;
};

struct WanderParams {
  double d_stop = 350.0;
  double d_turn = 700.0;
  double v_turn = 150.0;
  double turn_rate = 0.6;
  double spin_rate = 1.0;
  double clear_margin = 100.0;
  double corridor_margin = 80.0;
  double max_extra_spin_s = 1.5;
};

struct Command {
  double v = 0.0;
  double theta_dot = 0.0;
};

/// Stop > turn > cruise over the forward half-plane of both range sensors.
///
/// The stop layer fires on returns inside the corridor the body would sweep
/// (lateral offset below body radius + corridor_margin). It latches a spin
/// toward the more open side until that corridor is clear by clear_margin,
/// then keeps spinning for a random extra interval so repeated runs diverge.
/// The turn layer slows down and steers away from the nearest forward return.
class WanderController {
 public:
  WanderController(const WanderParams& params, const RobotParams& robot,
                   double sonar_half_width)
      : params_(params),
        v_cruise_(robot.v_cruise),
        body_radius_(robot.body_radius),
        sonar_half_width_(sonar_half_width) {}

  Command step(std::span<const RangeReading> lrf, std::span<const RangeReading> sonar,
               std::mt19937_64& rng, double dt);

  bool spinning() const { return spinning_; }

 private:
  WanderParams params_;
  double v_cruise_;
  double body_radius_;
  double sonar_half_width_;
  bool spinning_ = false;
  double spin_dir_ = 1.0;
  double extra_spin_left_ = -1.0;
};

/// Exact constant-twist (arc) motion update.
Pose integrate(const Pose& pose, double v, double theta_dot, double dt);

/// Dead-reckoning update from the executed velocities with
/// v (1 + e_v), theta_dot + e_w, e ~ N(0, sigma sqrt(dt)).
Pose odometry_step(const Pose& odom, double v, double theta_dot, double dt, double noise_sigma,
                   std::mt19937_64& rng);

struct RobotState {
  Pose true_pose;
  Pose odom_pose;
  double v = 0.0;
  double theta_dot = 0.0;
};

struct WorldConfig {
  Pen pen = Pen::defaults();
  Pose start{600.0, 600.0, 0.0};
  RobotParams robot;
  WanderParams wander;
  SensorSuite sensors;
  double noise_sigma = 0.0;
  double dt = 0.1;
};

class World {
 public:
  World(const WorldConfig& config, std::uint64_t seed);

  /// Sense, control, guard, integrate truth and odometry, then re-sense.
  void step();

  const WorldConfig& config() const { return config_; }
  const RobotState& robot() const { return robot_; }
  double time() const { return static_cast<double>(ticks_) * config_.dt; }
  std::uint64_t ticks() const { return ticks_; }

  const std::vector<RangeReading>& lrf() const { return lrf_; }
  const std::vector<RangeReading>& sonar() const { return sonar_; }
  double blob_area() const { return blob_; }

  /// Ticks in which the safety guard had to veto a commanded translation.
  std::uint64_t guard_interventions() const { return guard_interventions_; }
  /// Smallest true-pose clearance seen so far (mm from body centre).
  double min_clearance() const { return min_clearance_; }

 private:
  void sense();

  WorldConfig config_;
  std::mt19937_64 rng_;
  WanderController wander_;
  RobotState robot_;
  std::vector<RangeReading> lrf_;
  std::vector<RangeReading> sonar_;
  double blob_ = 0.0;
  std::uint64_t ticks_ = 0;
  std::uint64_t guard_interventions_ = 0;
  double min_clearance_;
};

}  // namespace robodca

#endif  // ROBODCA_WORLD_HPP
