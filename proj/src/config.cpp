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

#include "robodca/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace robodca {

using nlohmann::json;

namespace {

// Degrees are written with 15 significant digits so that a dump/parse cycle
// restores the exact radian value for any input given with <= 15 digits.
double to_deg(double rad) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", rad2deg(rad));
  return std::strtod(buf, nullptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

template <typename T>
T get(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

double get_deg(const json& j, const char* key, double fallback_rad) {
  if (!j.contains(key)) return fallback_rad;
  return deg2rad(j.at(key).get<double>());
}

WorldConfig pen_from_json(const json& j) {
  WorldConfig w = ExperimentConfig::default_world();
  Pen& pen = w.pen;
  pen.width = get(j, "width", pen.width);
  pen.height = get(j, "height", pen.height);
  pen.wall_height = get(j, "wall_height", pen.wall_height);
  if (j.contains("obstacles")) {
    pen.obstacles.clear();
    for (const auto& o : j.at("obstacles")) {
      pen.obstacles.push_back(Obstacle{o.at("x").get<double>(), o.at("y").get<double>(),
                                       o.at("radius").get<double>(), o.at("height").get<double>(),
                                       get(o, "pink", false)});
    }
  }
  if (j.contains("start")) {
    const json& s = j.at("start");
    w.start.x = get(s, "x", w.start.x);
    w.start.y = get(s, "y", w.start.y);
    w.start.heading = get_deg(s, "heading_deg", w.start.heading);
  }
  if (j.contains("robot")) {
    const json& r = j.at("robot");
    w.robot.v_max = get(r, "v_max", w.robot.v_max);
    w.robot.v_cruise = get(r, "v_cruise", w.robot.v_cruise);
    w.robot.theta_dot_max = get(r, "theta_dot_max", w.robot.theta_dot_max);
    w.robot.body_radius = get(r, "body_radius", w.robot.body_radius);
  }
  if (j.contains("wander")) {
    const json& c = j.at("wander");
    WanderParams& p = w.wander;
    p.d_stop = get(c, "d_stop", p.d_stop);
    p.d_turn = get(c, "d_turn", p.d_turn);
    p.v_turn = get(c, "v_turn", p.v_turn);
    p.turn_rate = get(c, "turn_rate", p.turn_rate);
    p.spin_rate = get(c, "spin_rate", p.spin_rate);
    p.clear_margin = get(c, "clear_margin", p.clear_margin);
    p.corridor_margin = get(c, "corridor_margin", p.corridor_margin);
    p.max_extra_spin_s = get(c, "max_extra_spin_s", p.max_extra_spin_s);
  }
  if (j.contains("sensors")) {
    const json& s = j.at("sensors");
    SensorSuite& ss = w.sensors;
    if (s.contains("lrf")) {
      const json& l = s.at("lrf");
      ss.lrf.half_span = get_deg(l, "half_span_deg", ss.lrf.half_span);
      ss.lrf.resolution = get_deg(l, "resolution_deg", ss.lrf.resolution);
      ss.lrf.max_range = get(l, "max_range", ss.lrf.max_range);
      ss.lrf.min_visible_height = get(l, "min_visible_height", ss.lrf.min_visible_height);
    }
    if (s.contains("sonar")) {
      const json& so = s.at("sonar");
      ss.sonar.transducers = get(so, "transducers", ss.sonar.transducers);
      ss.sonar.cone_half_angle = get_deg(so, "cone_half_angle_deg", ss.sonar.cone_half_angle);
      ss.sonar.rays_per_cone = get(so, "rays_per_cone", ss.sonar.rays_per_cone);
      ss.sonar.max_range = get(so, "max_range", ss.sonar.max_range);
      ss.sonar.min_visible_height = get(so, "min_visible_height", ss.sonar.min_visible_height);
    }
    if (s.contains("camera")) {
      const json& c = s.at("camera");
      ss.camera.half_fov = get_deg(c, "half_fov_deg", ss.camera.half_fov);
      ss.camera.gain = get(c, "gain", ss.camera.gain);
      ss.camera.min_area = get(c, "min_area", ss.camera.min_area);
    }
    ss.range_noise_sigma = get(s, "range_noise_sigma", ss.range_noise_sigma);
    ss.blob_noise_fraction = get(s, "blob_noise_fraction", ss.blob_noise_fraction);
  }
  w.noise_sigma = get(j, "noise_sigma", w.noise_sigma);
  w.dt = get(j, "dt", w.dt);

  try {
    pen.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid pen: ") + e.what());
  }
  if (w.sensors.sonar.transducers < 1 || w.sensors.sonar.rays_per_cone < 1) {
    throw ConfigError("sonar needs at least one transducer and one ray per cone");
  }
  if (!(w.sensors.lrf.resolution > 0.0)) throw ConfigError("laser resolution must be positive");
  return w;
}

json pen_to_json(const WorldConfig& w) {
  json obstacles = json::array();
  for (const auto& o : w.pen.obstacles) {
    obstacles.push_back({{"x", o.x}, {"y", o.y}, {"radius", o.radius}, {"height", o.height},
                         {"pink", o.pink}});
  }
  const SensorSuite& s = w.sensors;
  return json{
      {"width", w.pen.width},
      {"height", w.pen.height},
      {"wall_height", w.pen.wall_height},
      {"obstacles", obstacles},
      {"start", {{"x", w.start.x}, {"y", w.start.y}, {"heading_deg", to_deg(w.start.heading)}}},
      {"robot",
       {{"v_max", w.robot.v_max},
        {"v_cruise", w.robot.v_cruise},
        {"theta_dot_max", w.robot.theta_dot_max},
        {"body_radius", w.robot.body_radius}}},
      {"wander",
       {{"d_stop", w.wander.d_stop},
        {"d_turn", w.wander.d_turn},
        {"v_turn", w.wander.v_turn},
        {"turn_rate", w.wander.turn_rate},
        {"spin_rate", w.wander.spin_rate},
        {"clear_margin", w.wander.clear_margin},
        {"corridor_margin", w.wander.corridor_margin},
        {"max_extra_spin_s", w.wander.max_extra_spin_s}}},
      {"sensors",
       {{"lrf",
         {{"half_span_deg", to_deg(s.lrf.half_span)},
          {"resolution_deg", to_deg(s.lrf.resolution)},
          {"max_range", s.lrf.max_range},
          {"min_visible_height", s.lrf.min_visible_height}}},
        {"sonar",
         {{"transducers", s.sonar.transducers},
          {"cone_half_angle_deg", to_deg(s.sonar.cone_half_angle)},
          {"rays_per_cone", s.sonar.rays_per_cone},
          {"max_range", s.sonar.max_range},
          {"min_visible_height", s.sonar.min_visible_height}}},
        {"camera",
         {{"half_fov_deg", to_deg(s.camera.half_fov)},
          {"gain", s.camera.gain},
          {"min_area", s.camera.min_area}}},
        {"range_noise_sigma", s.range_noise_sigma},
        {"blob_noise_fraction", s.blob_noise_fraction}}},
      {"noise_sigma", w.noise_sigma},
      {"dt", w.dt},
  };
}

AccumulationPolicy policy_from(const std::string& s) {
  if (s == "every_cycle") return AccumulationPolicy::kEveryCycle;
  if (s == "on_antigen_only") return AccumulationPolicy::kOnAntigenOnly;
  throw ConfigError("unknown accumulation policy '" + s + "'");
}

const char* policy_name(AccumulationPolicy p) {
  return p == AccumulationPolicy::kEveryCycle ? "every_cycle" : "on_antigen_only";
}

RateWeighting weighting_from(const std::string& s) {
  if (s == "per_type") return RateWeighting::kPerType;
  if (s == "per_presentation") return RateWeighting::kPerPresentation;
  throw ConfigError("unknown rate weighting '" + s + "'");
}

const char* weighting_name(RateWeighting w) {
  return w == RateWeighting::kPerType ? "per_type" : "per_presentation";
}

}  // namespace

WorldConfig ExperimentConfig::default_world() {
  WorldConfig w;
  w.pen = Pen::defaults();
  w.start = Pose{600.0, 600.0, 0.0};
  w.noise_sigma = 0.05;
  return w;
}

void ExperimentConfig::validate() const {
  if (medians.empty()) throw ConfigError("at least one migration median is required");
  for (double m : medians) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("migration medians must be positive");
  }
  if (runs_per_median < 1) throw ConfigError("runs per median must be at least 1");
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) {
    throw ConfigError("duration must be non-negative");
  }
  if (!(mcav_threshold >= 0.0 && mcav_threshold <= 1.0)) {
    throw ConfigError("MCAV threshold must lie in [0, 1]");
  }
  if (population_size < 1) throw ConfigError("population size must be at least 1");
  if (!(spread_fraction >= 0.0 && spread_fraction < 1.0)) {
    throw ConfigError("spread fraction must lie in [0, 1)");
  }
  if (max_antigen_per_cell < 1) throw ConfigError("max antigen per cell must be at least 1");
  if (pamp_scale && !(*pamp_scale > 0.0)) throw ConfigError("PAMP scale must be positive");
  if (!(world.noise_sigma >= 0.0)) throw ConfigError("noise sigma must be non-negative");
  if (!(world.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cycle_interval_s > 0.0)) throw ConfigError("cycle interval must be positive");
  const double ticks = cycle_interval_s / world.dt;
  if (std::abs(ticks - std::round(ticks)) > 1e-9 || std::round(ticks) < 1.0) {
    throw ConfigError("cycle interval must be a whole number of simulation ticks");
  }
  try {
    world.pen.validate();
    PenGrid(world.pen.width, world.pen.height);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid pen: ") + e.what());
  }
}

WorldConfig parse_pen(std::string_view json_text) {
  try {
    return pen_from_json(parse_json(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid pen description: ") + e.what());
  }
}

WorldConfig load_pen_file(const std::filesystem::path& path) {
  return parse_pen(read_file(path));
}

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  const json j = parse_json(json_text);
  ExperimentConfig c;
  try {
    c.medians = get(j, "medians", c.medians);
    c.runs_per_median = get(j, "runs_per_median", c.runs_per_median);
    c.duration_s = get(j, "duration_s", c.duration_s);
    c.mcav_threshold = get(j, "mcav_threshold", c.mcav_threshold);
    c.population_size = get(j, "population_size", c.population_size);
    c.spread_fraction = get(j, "spread_fraction", c.spread_fraction);
    c.max_antigen_per_cell = get(j, "max_antigen_per_cell", c.max_antigen_per_cell);
    if (j.contains("accumulation")) c.policy = policy_from(j.at("accumulation").get<std::string>());
    if (j.contains("weights")) {
      try {
        c.weights = WeightMatrix(j.at("weights").get<WeightMatrix::Rows>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid weights: ") + e.what());
      }
    }
    if (j.contains("lookup")) {
      try {
        c.lookup = RangeLookup(j.at("lookup").get<std::vector<RangeLookup::Knot>>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid lookup table: ") + e.what());
      }
    }
    if (j.contains("signal_fov_deg")) {
      const auto fov = j.at("signal_fov_deg").get<std::array<double, 2>>();
      try {
        c.signal_fov = FovWindow(deg2rad(fov[0]), deg2rad(fov[1]));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid signal FOV: ") + e.what());
      }
    }
    if (j.contains("pamp_scale") && !j.at("pamp_scale").is_null()) {
      c.pamp_scale = j.at("pamp_scale").get<double>();
    }
    c.cycle_interval_s = get(j, "cycle_interval_s", c.cycle_interval_s);
    c.perfect_localization = get(j, "perfect_localization", c.perfect_localization);
    if (j.contains("rate_weighting")) {
      c.weighting = weighting_from(j.at("rate_weighting").get<std::string>());
    }
    c.seed = get<std::uint64_t>(j, "seed", c.seed);
    c.out_dir = get(j, "out", c.out_dir);

    if (j.contains("pen")) {
      c.world = pen_from_json(j.at("pen"));
    } else if (j.contains("pen_file")) {
      std::filesystem::path p = j.at("pen_file").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      c.world = load_pen_file(p);
    }
    c.world.noise_sigma = get(j, "noise_sigma", c.world.noise_sigma);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

std::string dump_config(const ExperimentConfig& c) {
  json j{
      {"medians", c.medians},
      {"runs_per_median", c.runs_per_median},
      {"duration_s", c.duration_s},
      {"mcav_threshold", c.mcav_threshold},
      {"population_size", c.population_size},
      {"spread_fraction", c.spread_fraction},
      {"max_antigen_per_cell", c.max_antigen_per_cell},
      {"accumulation", policy_name(c.policy)},
      {"weights", c.weights.rows()},
      {"lookup", c.lookup.knots()},
      {"signal_fov_deg", {to_deg(c.signal_fov.min_angle), to_deg(c.signal_fov.max_angle)}},
      {"pamp_scale", c.pamp_scale ? json(*c.pamp_scale) : json(nullptr)},
      {"cycle_interval_s", c.cycle_interval_s},
      {"perfect_localization", c.perfect_localization},
      {"rate_weighting", weighting_name(c.weighting)},
      {"seed", c.seed},
      {"out", c.out_dir},
      {"noise_sigma", c.world.noise_sigma},
      {"pen", pen_to_json(c.world)},
  };
  return j.dump(2) + "\n";
}

}  // namespace robodca
