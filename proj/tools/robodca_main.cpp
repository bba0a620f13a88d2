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

// robodca: run the wander-and-classify sweep, or feed a synthetic stream to the engine.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "robodca/config.hpp"
#include "robodca/experiment.hpp"

namespace {

int run_synthetic_mode(const robodca::ExperimentConfig& config, const std::string& stream_path) {
  const auto stream = robodca::load_stream(stream_path);
  const std::filesystem::path out = config.out_dir;
  for (double median : config.medians) {
    const auto result = robodca::run_synthetic(stream, config, median);
    robodca::write_synthetic(out / robodca::median_tag(median), result, config.mcav_threshold);
    std::size_t anomalous = 0;
    for (const auto& [type, label] : result.labels) {
      if (label == robodca::Label::kAnomalous) ++anomalous;
    }
    std::cout << robodca::median_tag(median) << ": " << result.presentations.size()
              << " presentations, " << result.table.size() << " types, " << anomalous
              << " anomalous\n";
  }
  return 0;
}

int run_sweep_mode(const robodca::ExperimentConfig& config, int jobs) {
  const auto sweep = robodca::run_sweep(config, jobs);
  robodca::write_sweep(config.out_dir, sweep, config);
  for (const auto& run : sweep.runs) {
    const auto last = run.errors.empty() ? robodca::ErrorRow{} : run.errors.back();
    std::cout << robodca::median_tag(run.median) << " run " << run.run_index << " seed " << run.seed
              << ": fp=" << last.fp_rate << " fn=" << last.fn_rate
              << " types=" << last.n_presented_types << '\n';
  }
  std::cout << "wrote " << config.out_dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dendritic cell classifier on a simulated wandering robot"};

  std::string config_path;
  std::vector<double> medians;
  std::optional<int> runs;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise_sigma;
  bool perfect_localization = false;
  std::string synthetic_path;
  std::string out_dir;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  app.add_option("--config", config_path, "Experiment configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--median", medians, "Migration threshold medians")->delimiter(',');
  app.add_option("--runs", runs, "Runs per median");
  app.add_option("--duration", duration, "Simulated seconds per run");
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--noise-sigma", noise_sigma, "Odometry noise sigma");
  app.add_flag("--perfect-localization", perfect_localization,
               "Encode antigen from the true pose instead of odometry");
  app.add_option("--synthetic", synthetic_path, "Synthetic signal/antigen stream")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    robodca::ExperimentConfig config =
        config_path.empty() ? robodca::ExperimentConfig{} : robodca::load_config(config_path);
    if (!medians.empty()) config.medians = medians;
    if (runs) config.runs_per_median = *runs;
    if (duration) config.duration_s = *duration;
    if (seed) config.seed = *seed;
    if (noise_sigma) config.world.noise_sigma = *noise_sigma;
    if (perfect_localization) config.perfect_localization = true;
    if (!out_dir.empty()) config.out_dir = out_dir;
    config.validate();

    if (!synthetic_path.empty()) return run_synthetic_mode(config, synthetic_path);
    return run_sweep_mode(config, jobs);
  } catch (const std::exception& e) {
    std::cerr << "robodca: " << e.what() << '\n';
    return 1;
  }
}
