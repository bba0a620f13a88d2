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

#include "robodca/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robodca {

Pen Pen::defaults() {
  Pen pen;
  pen.obstacles = {
      Obstacle{3000.0, 2200.0, 100.0, 300.0, true},  // A: short, anomalous
      Obstacle{1200.0, 800.0, 100.0, 500.0, true},   // B: tall, normal
  };
  return pen;
}

void Pen::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("pen dimensions must be positive");
  if (!(wall_height > 0.0)) throw std::invalid_argument("wall height must be positive");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const Obstacle& o = obstacles[i];
    if (!(o.radius > 0.0) || !(o.height > 0.0)) {
      throw std::invalid_argument("obstacle radius and height must be positive");
    }
    if (o.x - o.radius < 0.0 || o.x + o.radius > width || o.y - o.radius < 0.0 ||
        o.y + o.radius > height) {
      throw std::invalid_argument("obstacle must lie fully inside the pen");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const Obstacle& p = obstacles[j];
      if (std::hypot(o.x - p.x, o.y - p.y) < o.radius + p.radius) {
        throw std::invalid_argument("obstacles must not overlap");
      }
    }
  }
}

double Pen::clearance(double x, double y) const {
  double c = std::min({x, width - x, y, height - y});
  for (const auto& o : obstacles) c = std::min(c, std::hypot(x - o.x, y - o.y) - o.radius);
  return c;
}

RayHit cast_ray(const Pen& pen, double x, double y, double angle, double min_height, int skip) {
  const double ux = std::cos(angle);
  const double uy = std::sin(angle);
  RayHit hit;

  if (pen.wall_height >= min_height) {
    double t = kNoReturn;
    if (ux > 0.0) t = std::min(t, (pen.width - x) / ux);
    if (ux < 0.0) t = std::min(t, -x / ux);
    if (uy > 0.0) t = std::min(t, (pen.height - y) / uy);
    if (uy < 0.0) t = std::min(t, -y / uy);
    if (t < hit.distance) hit = {std::max(0.0, t), kHitWall};
  }

  for (std::size_t i = 0; i < pen.obstacles.size(); ++i) {
    if (static_cast<int>(i) == skip) continue;
    const Obstacle& o = pen.obstacles[i];
    if (o.height < min_height) continue;
    const double fx = x - o.x;
    const double fy = y - o.y;
    const double b = fx * ux + fy * uy;
    const double c = fx * fx + fy * fy - o.radius * o.radius;
    double t;
    if (c <= 0.0) {
      t = 0.0;
    } else {
      const double disc = b * b - c;
      if (disc < 0.0) continue;
      t = -b - std::sqrt(disc);
      if (t < 0.0) continue;
    }
    if (t < hit.distance) hit = {t, static_cast<int>(i)};
  }
  return hit;
}

double raycast(const Pen& pen, double x, double y, double angle, double min_height) {
  return cast_ray(pen, x, y, angle, min_height).distance;
}

std::vector<RangeReading> lrf_scan(const Pen& pen, const Pose& pose, const LaserParams& p) {
  const int half = static_cast<int>(std::lround(p.half_span / p.resolution));
  std::vector<RangeReading> scan;
  scan.reserve(static_cast<std::size_t>(2 * half + 1));
  for (int k = -half; k <= half; ++k) {
    const double a = k * p.resolution;
    double d = raycast(pen, pose.x, pose.y, pose.heading + a, p.min_visible_height);
    if (d > p.max_range) d = kNoReturn;
    scan.push_back({a, d});
  }
  return scan;
}

std::vector<RangeReading> sonar_scan(const Pen& pen, const Pose& pose, const SonarParams& p) {
  std::vector<RangeReading> ranges;
  ranges.reserve(static_cast<std::size_t>(p.transducers));
  const double spacing = 2.0 * kPi / p.transducers;
  for (int i = 0; i < p.transducers; ++i) {
    const double axis = wrap_pi(i * spacing);
    double nearest = kNoReturn;
    for (int k = 0; k < p.rays_per_cone; ++k) {
      const double off = p.rays_per_cone == 1
                             ? 0.0
                             : -p.cone_half_angle + 2.0 * p.cone_half_angle * k / (p.rays_per_cone - 1);
      nearest = std::min(nearest, raycast(pen, pose.x, pose.y, pose.heading + axis + off,
                                          p.min_visible_height));
    }
    if (nearest > p.max_range) nearest = kNoReturn;
    ranges.push_back({axis, nearest});
  }
  return ranges;
}

double camera_blob(const Pen& pen, const Pose& pose, const CameraParams& p) {
  double best = 0.0;
  for (std::size_t i = 0; i < pen.obstacles.size(); ++i) {
    const Obstacle& o = pen.obstacles[i];
    if (!o.pink) continue;
    const double dx = o.x - pose.x;
    const double dy = o.y - pose.y;
    const double d = std::hypot(dx, dy);
    const double bearing = std::atan2(dy, dx);
    if (std::abs(wrap_pi(bearing - pose.heading)) > p.half_fov) continue;
    const RayHit blocker = cast_ray(pen, pose.x, pose.y, bearing, o.height, static_cast<int>(i));
    if (blocker.target >= 0 && blocker.distance < d - o.radius) continue;
    best = std::max(best, p.gain * 2.0 * o.radius * o.height / (d * d));
  }
  return best < p.min_area ? 0.0 : best;
}

Command WanderController::step(std::span<const RangeReading> lrf,
                               std::span<const RangeReading> sonar, std::mt19937_64& rng,
                               double dt) {
  // Only the strictly forward half-plane counts; side sonar cones reach behind the robot.
  const double front = kPi / 2.0 - 1e-9;
  const double corridor = body_radius_ + params_.corridor_margin;
  double nearest = kNoReturn;
  double nearest_angle = 0.0;
  double ahead = kNoReturn;  // forward distance to the nearest return inside the swept corridor
  double left = kNoReturn;
  double right = kNoReturn;
  auto visit = [&](std::span<const RangeReading> readings, double beam_half_width) {
    for (const auto& r : readings) {
      if (std::abs(r.angle) >= front || std::isinf(r.distance)) continue;
      if (r.distance < nearest) {
        nearest = r.distance;
        nearest_angle = r.angle;
      }
      if (r.angle > 0.0) left = std::min(left, r.distance);
      if (r.angle < 0.0) right = std::min(right, r.distance);
      const double a = std::max(0.0, std::abs(r.angle) - beam_half_width);
      if (r.distance * std::sin(a) < corridor) ahead = std::min(ahead, r.distance * std::cos(a));
    }
  };
  visit(lrf, 0.0);
  visit(sonar, sonar_half_width_);

  if (spinning_) {
    if (ahead > params_.d_stop + params_.clear_margin) {
      if (extra_spin_left_ < 0.0) {
        extra_spin_left_ =
            std::uniform_real_distribution<double>(0.0, params_.max_extra_spin_s)(rng);
      }
      extra_spin_left_ -= dt;
      if (extra_spin_left_ < 0.0) {
        spinning_ = false;
        extra_spin_left_ = -1.0;
      }
    }
    if (spinning_) return {0.0, spin_dir_ * params_.spin_rate};
  }

  if (ahead < params_.d_stop) {
    spinning_ = true;
    extra_spin_left_ = -1.0;
    spin_dir_ = left >= right ? 1.0 : -1.0;
    return {0.0, spin_dir_ * params_.spin_rate};
  }
  if (nearest < params_.d_turn) {
    double away;
    if (nearest_angle > 0.0) {
      away = -1.0;
    } else if (nearest_angle < 0.0) {
      away = 1.0;
    } else {
      away = left >= right ? 1.0 : -1.0;
    }
    return {params_.v_turn, away * params_.turn_rate};
  }
  return {v_cruise_, 0.0};
}

Pose integrate(const Pose& pose, double v, double theta_dot, double dt) {
  Pose next = pose;
  if (std::abs(theta_dot) < 1e-12) {
    next.x += v * std::cos(pose.heading) * dt;
    next.y += v * std::sin(pose.heading) * dt;
  } else {
    const double r = v / theta_dot;
    const double h1 = pose.heading + theta_dot * dt;
    next.x += r * (std::sin(h1) - std::sin(pose.heading));
    next.y -= r * (std::cos(h1) - std::cos(pose.heading));
    next.heading = h1;
  }
  next.heading = normalize_heading(next.heading);
  return next;
}

Pose odometry_step(const Pose& odom, double v, double theta_dot, double dt, double noise_sigma,
                   std::mt19937_64& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be non-negative");
  if (noise_sigma == 0.0) return integrate(odom, v, theta_dot, dt);
  std::normal_distribution<double> noise(0.0, noise_sigma * std::sqrt(dt));
  const double ev = noise(rng);
  const double ew = noise(rng);
  return integrate(odom, v * (1.0 + ev), theta_dot + ew, dt);
}

World::World(const WorldConfig& config, std::uint64_t seed)
    : config_(config),
      rng_(seed),
      wander_(config.wander, config.robot, config.sensors.sonar.cone_half_angle) {
  config_.pen.validate();
  if (!(config_.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(config_.noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be non-negative");
  config_.start.heading = normalize_heading(config_.start.heading);
  if (config_.pen.clearance(config_.start.x, config_.start.y) < config_.robot.body_radius) {
    throw std::invalid_argument("robot start pose collides with the pen geometry");
  }
  robot_.true_pose = config_.start;
  robot_.odom_pose = config_.start;
  min_clearance_ = config_.pen.clearance(config_.start.x, config_.start.y);
  sense();
}

void World::sense() {
  const Pose& pose = robot_.true_pose;
  const SensorSuite& s = config_.sensors;
  lrf_ = lrf_scan(config_.pen, pose, s.lrf);
  sonar_ = sonar_scan(config_.pen, pose, s.sonar);
  blob_ = camera_blob(config_.pen, pose, s.camera);

  if (s.range_noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, s.range_noise_sigma);
    auto perturb = [&](std::vector<RangeReading>& readings) {
      for (auto& r : readings) {
        const double e = noise(rng_);
        if (!std::isinf(r.distance)) r.distance = std::max(0.0, r.distance + e);
      }
    };
    perturb(lrf_);
    perturb(sonar_);
  }
  if (s.blob_noise_fraction > 0.0) {
    std::normal_distribution<double> noise(0.0, s.blob_noise_fraction);
    blob_ = std::max(0.0, blob_ * (1.0 + noise(rng_)));
  }
}

void World::step() {
  const double dt = config_.dt;
  const RobotParams& rp = config_.robot;
  Command cmd = wander_.step(lrf_, sonar_, rng_, dt);
  cmd.v = std::clamp(cmd.v, -rp.v_max, rp.v_max);
  cmd.theta_dot = std::clamp(cmd.theta_dot, -rp.theta_dot_max, rp.theta_dot_max);

  Pose next = integrate(robot_.true_pose, cmd.v, cmd.theta_dot, dt);
  if (config_.pen.clearance(next.x, next.y) < rp.body_radius) {
    ++guard_interventions_;
    cmd.v = 0.0;
    if (cmd.theta_dot == 0.0) cmd.theta_dot = std::min(config_.wander.spin_rate, rp.theta_dot_max);
    next = integrate(robot_.true_pose, 0.0, cmd.theta_dot, dt);
  }

  robot_.true_pose = next;
  robot_.odom_pose = odometry_step(robot_.odom_pose, cmd.v, cmd.theta_dot, dt,
                                   config_.noise_sigma, rng_);
  robot_.v = cmd.v;
  robot_.theta_dot = cmd.theta_dot;
  ++ticks_;
  min_clearance_ = std::min(min_clearance_, config_.pen.clearance(next.x, next.y));
  sense();
}

}  // namespace robodca
