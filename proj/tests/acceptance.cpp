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


// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <vector>

#include "robodca/antigen.hpp"
#include "robodca/config.hpp"
#include "robodca/experiment.hpp"
#include "robodca/transducer.hpp"
#include "robodca/world.hpp"

using namespace robodca;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kSyntheticBudgetS = 5.0;
constexpr double kMultiplicityBudgetS = 1.0;
constexpr double kSweepBudgetS = 300.0;
constexpr double kSeparationLow = 0.1;
constexpr double kSeparationHigh = 0.9;
constexpr std::uint64_t kMinPresentationsPerType = 100;
constexpr double kFirstMinuteFpLimit = 0.2;
constexpr double kFirstMinute = 60.0;
constexpr double kDriftEarly = 120.0;
constexpr int kSafetyRuns = 10;

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s [%s] %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Every regular file under a and b, compared byte for byte.
bool identical_trees(const fs::path& a, const fs::path& b, std::size_t* files) {
  std::map<std::string, std::string> left, right;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) left[fs::relative(e.path(), a).string()] = slurp(e.path());
  }
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) right[fs::relative(e.path(), b).string()] = slurp(e.path());
  }
  *files = left.size();
  return !left.empty() && left == right;
}

double summary_at(const std::vector<SweepRow>& rows, double median, double t, bool fp) {
  for (const auto& r : rows) {
    if (r.median == median && std::abs(r.t - t) < 1e-9) return fp ? r.mean_fp : r.mean_fn;
  }
  return NAN;
}

void engine_separation() {
  const ExperimentConfig config;
  std::vector<StreamRecord> stream;
  double t = 0.0;
  for (int round = 0; round < 20; ++round) {
    for (std::uint32_t id = 0; id < 5; ++id) {
      const SignalVector s = id < 2 ? SignalVector{0, 0, 100} : SignalVector{100, 50, 0};
      for (int k = 0; k < 5; ++k) stream.push_back({t += 1.0, s, {{AntigenType{id}, 10}}});
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst_low = 0.0;
  double worst_high = 1.0;
  std::uint64_t fewest = ~std::uint64_t{0};
  for (double m : config.medians) {
    const auto r = run_synthetic(stream, config, m);
    for (std::uint32_t id = 0; id < 5; ++id) {
      if (!r.table.contains(AntigenType{id})) {
        ok = false;
        continue;
      }
      const auto& e = r.table.at(AntigenType{id});
      fewest = std::min(fewest, e.total_count);
      if (id < 2) worst_low = std::max(worst_low, e.mcav());
      else worst_high = std::min(worst_high, e.mcav());
    }
  }
  const double elapsed = seconds_since(t0);
  ok = ok && fewest >= kMinPresentationsPerType && worst_low <= kSeparationLow &&
       worst_high >= kSeparationHigh && elapsed < kSyntheticBudgetS;
  report("1 engine separation", ok,
         "max mcav{0,1}=" + num(worst_low) + " min mcav{2,3,4}=" + num(worst_high) +
             " min presentations/type=" + std::to_string(fewest) + " time=" + num(elapsed) + "s");
}

void multiplicity_bounds() {
  const VelocityLimits lim;
  const auto t0 = std::chrono::steady_clock::now();
  const int top = multiplicity(lim.v_max, lim.theta_dot_max, lim);
  const int still = multiplicity(0, 0, lim);
  int lo = 1000, hi = -1;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const int m = multiplicity(lim.v_max * i / 100.0, lim.theta_dot_max * j / 100.0, lim);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  }
  const double elapsed = seconds_since(t0);
  report("2 antigen multiplicity bounds", top == 2 && still == 102 && lo >= 2 && hi <= 102 &&
                                              elapsed < kMultiplicityBudgetS,
         "full speed=" + std::to_string(top) + " stationary=" + std::to_string(still) +
             " grid range=[" + std::to_string(lo) + "," + std::to_string(hi) + "] time=" +
             num(elapsed) + "s");
}

void lookup_fidelity() {
  const auto table = RangeLookup::defaults();
  const std::vector<std::pair<double, double>> expected{
      {0, 100}, {300, 90}, {600, 50}, {900, 20}, {1200, 0}, {450, 70}};
  bool exact = true;
  for (const auto& [d, s] : expected) exact = exact && strength_from_distance(table, d) == s;
  bool monotone = true;
  double prev = strength_from_distance(table, 0);
  for (int d = 1; d <= 2000; ++d) {
    const double s = strength_from_distance(table, d);
    monotone = monotone && s <= prev;
    prev = s;
  }
  report("3 distance lookup fidelity", exact && monotone,
         std::string("knots and midpoint exact=") + (exact ? "yes" : "no") +
             " monotone over 0-2000 mm=" + (monotone ? "yes" : "no"));
}

void conservation() {
  const ExperimentConfig config;
  const auto r = run_single(config, 30, 0);
  report("4 antigen conservation", r.conservation_violations == 0 &&
                                       r.cycles == static_cast<std::uint64_t>(config.duration_s),
         "cycles checked=" + std::to_string(r.cycles) +
             " violations=" + std::to_string(r.conservation_violations) +
             " presentations=" + std::to_string(r.presentations.size()));
}

void determinism(const fs::path& scratch) {
  const ExperimentConfig config;
  const fs::path serial = scratch / "serial";
  const fs::path parallel = scratch / "parallel";
  write_sweep(serial, run_sweep(config, 1), config);
  write_sweep(parallel, run_sweep(config, 4), config);
  std::size_t files = 0;
  const bool same = identical_trees(serial, parallel, &files);

  ExperimentConfig quiet = config;
  quiet.world.noise_sigma = 0.0;
  const fs::path q1 = scratch / "quiet1";
  const fs::path q2 = scratch / "quiet2";
  const auto qs = run_sweep(quiet, 1);
  write_sweep(q1, qs, quiet);
  write_sweep(q2, run_sweep(quiet, 3), quiet);
  std::size_t qfiles = 0;
  const bool qsame = identical_trees(q1, q2, &qfiles);
  std::uint64_t qviolations = 0;
  for (const auto& r : qs.runs) qviolations += r.conservation_violations;

  report("5 deterministic sweep output", same && qsame && qviolations == 0,
         std::to_string(files) + " files identical serial vs 4 workers=" + (same ? "yes" : "no") +
             "; zero-noise sweep identical=" + (qsame ? "yes" : "no") +
             " conservation violations=" + std::to_string(qviolations));
}

struct SweepStats {
  SweepResult sweep;
  double elapsed = 0.0;
};

SweepStats default_sweep() {
  const ExperimentConfig config;
  const auto t0 = std::chrono::steady_clock::now();
  SweepStats s{run_sweep(config, 1), 0.0};
  s.elapsed = seconds_since(t0);
  return s;
}

void qualitative_trends(const SweepStats& s) {
  const ExperimentConfig config;
  const auto& rows = s.sweep.summary;
  const double end = config.duration_s;

  const double fp30 = summary_at(rows, 30, end, true);
  const double fp240 = summary_at(rows, 240, end, true);
  report("6a M30 final fp below M240 final fp", fp30 < fp240 && s.elapsed < kSweepBudgetS,
         "M30 fp=" + num(fp30) + " M240 fp=" + num(fp240) + " sweep time=" + num(s.elapsed) + "s");

  bool first_ok = true;
  std::string detail;
  for (double m : config.medians) {
    const double fp = summary_at(rows, m, kFirstMinute, true);
    first_ok = first_ok && fp < kFirstMinuteFpLimit;
    detail += median_tag(m) + "=" + num(fp) + " ";
  }
  report("6b first-minute fp below 0.2", first_ok && s.elapsed < kSweepBudgetS, detail);

  const double tot15 = summary_at(rows, 15, end, true) + summary_at(rows, 15, end, false);
  const double tot30 = summary_at(rows, 30, end, true) + summary_at(rows, 30, end, false);
  report("6c M15 final total error above M30", tot15 > tot30 && s.elapsed < kSweepBudgetS,
         "M15 fp+fn=" + num(tot15) + " M30 fp+fn=" + num(tot30));
}

void drift(const SweepStats& s) {
  const ExperimentConfig config;
  double early = 0.0;
  double late = 0.0;
  for (double m : config.medians) {
    early += summary_at(s.sweep.summary, m, kDriftEarly, true) +
             summary_at(s.sweep.summary, m, kDriftEarly, false);
    late += summary_at(s.sweep.summary, m, config.duration_s, true) +
            summary_at(s.sweep.summary, m, config.duration_s, false);
  }
  const double n = static_cast<double>(config.medians.size());
  report("7 error grows with odometry drift", config.world.noise_sigma > 0.0 && late >= early,
         "noise_sigma=" + num(config.world.noise_sigma) + " mean total error t=120: " +
             num(early / n) + " t=600: " + num(late / n));
}

void safety() {
  const WorldConfig world = ExperimentConfig::default_world();
  int collisions = 0;
  std::uint64_t vetoes = 0;
  double closest = kNoReturn;
  for (int seed = 0; seed < kSafetyRuns; ++seed) {
    World w(world, derive_seed(ExperimentConfig{}.seed, 0.0, seed));
    bool hit = false;
    for (int k = 0; k < 6000; ++k) {
      w.step();
      const Pose& p = w.robot().true_pose;
      if (world.pen.clearance(p.x, p.y) < world.robot.body_radius) hit = true;
    }
    collisions += hit ? 1 : 0;
    vetoes += w.guard_interventions();
    closest = std::min(closest, w.min_clearance());
  }
  report("8 wander controller safety", collisions == 0,
         std::to_string(kSafetyRuns) + " runs x 600 s, runs with collision=" +
             std::to_string(collisions) + " closest centre clearance=" + num(closest) +
             " mm (body radius " + num(world.robot.body_radius) + ") guard vetoes=" +
             std::to_string(vetoes));
}

}  // namespace

int main() {
  const fs::path scratch = fs::current_path() / "acceptance_out";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  engine_separation();
  multiplicity_bounds();
  lookup_fidelity();
  conservation();
  determinism(scratch);
  const SweepStats sweep = default_sweep();
  qualitative_trends(sweep);
  drift(sweep);
  safety();

  fs::remove_all(scratch);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
