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

#ifndef ROBODCA_EXPERIMENT_HPP
#define ROBODCA_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "robodca/antigen.hpp"
#include "robodca/config.hpp"
#include "robodca/dca.hpp"
#include "robodca/metrics.hpp"

namespace robodca {

/// Stable per-run seed: base ^ splitmix64(splitmix64(bits(median)) ^ run_index).
std::uint64_t derive_seed(std::uint64_t base_seed, double median, int run_index);

/// Scale that maps the largest anomalous blob, seen from the stopping distance, to PAMP 100.
double default_pamp_scale(const WorldConfig& world);

/// Run directory tag, e.g. "M30".
std::string median_tag(double median);

struct TrajectoryRow {
  double t = 0.0;
  Pose true_pose;
  Pose odom_pose;
  double v = 0.0;
  double theta_dot = 0.0;
};

/// Cumulative MCAV of one type, emitted when its counts change.
struct McavRow {
  double t = 0.0;
  AntigenType type;
  std::uint64_t mature_count = 0;
  std::uint64_t total_count = 0;
  double mcav = 0.0;
};

struct RunResult {
  double median = 0.0;
  int run_index = 0;
  std::uint64_t seed = 0;

  std::vector<TimedPresentation> presentations;
  std::vector<McavRow> mcav_series;
  std::vector<ErrorRow> errors;
  std::vector<TrajectoryRow> trajectory;
  McavTable final_table;

  std::uint64_t cycles = 0;
  std::uint64_t conservation_violations = 0;
  std::uint64_t dropped_emissions = 0;  ///< cycles whose estimated pose fell outside the pen
  std::uint64_t guard_interventions = 0;
  double min_clearance = 0.0;
};

/// One seeded closed-loop run: world -> transducers -> antigen -> DCA -> metrics.
RunResult run_single(const ExperimentConfig& config, double median, int run_index,
                     const TruthTable& truth);
RunResult run_single(const ExperimentConfig& config, double median, int run_index);

struct SweepRow {
  double median = 0.0;
  double t = 0.0;
  double mean_fp = 0.0;
  double mean_fn = 0.0;
};

struct SweepResult {
  std::vector<RunResult> runs;  ///< median-major, run index minor
  std::vector<SweepRow> summary;
};

class RunFailure : public std::runtime_error {
 public:
  RunFailure(const std::string& what, std::uint64_t seed)
      : std::runtime_error(what), seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// All medians x runs_per_median runs on up to `jobs` worker threads. The
/// result does not depend on `jobs`. Throws RunFailure naming the seed of
/// the first failed run.
SweepResult run_sweep(const ExperimentConfig& config, int jobs = 1);

/// Run-averaged error rates per median and reporting time.
std::vector<SweepRow> summarize(std::span<const RunResult> runs);

// Synthetic stream: one record per cycle,
//   t, pamp, danger, safe, id*count[;id*count...]
// The antigen field may be empty and "*count" defaults to 1. Blank lines and
// lines starting with '#' are skipped.

struct StreamRecord {
  double t = 0.0;
  SignalVector signals;
  std::vector<AntigenBatch> antigen;
};

class StreamParseError : public std::runtime_error {
 public:
  StreamParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

std::vector<StreamRecord> parse_stream(std::istream& in);
std::vector<StreamRecord> load_stream(const std::filesystem::path& path);

struct SyntheticResult {
  double median = 0.0;
  std::vector<TimedPresentation> presentations;
  std::vector<McavRow> mcav_series;
  McavTable table;
  std::map<AntigenType, Label> labels;
};

/// Feeds records straight into a DCA engine, bypassing simulator and transducers.
SyntheticResult run_synthetic(std::span<const StreamRecord> stream, const ExperimentConfig& config,
                              double median);

// CSV output. All files carry a header row.

void write_presentations_csv(std::ostream& out, std::span<const TimedPresentation> log);
void write_mcav_csv(std::ostream& out, std::span<const McavRow> rows);
void write_errors_csv(std::ostream& out, std::span<const ErrorRow> rows);
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRow> rows);
void write_truth_csv(std::ostream& out, const TruthTable& truth);
void write_summary_csv(std::ostream& out, std::span<const SweepRow> rows);

/// presentations.csv, mcav.csv, errors.csv, trajectory.csv, classification.csv.
void write_run(const std::filesystem::path& dir, const RunResult& run, const TruthTable& truth,
               double threshold);
/// Per-run directories under <out>/M<median>/run<k>, plus truth.csv, summary.csv,
/// runs.csv and effective_config.json at the top level.
void write_sweep(const std::filesystem::path& out, const SweepResult& sweep,
                 const ExperimentConfig& config);
void write_synthetic(const std::filesystem::path& dir, const SyntheticResult& result,
                     double threshold);

}  // namespace robodca

#endif  // ROBODCA_EXPERIMENT_HPP
