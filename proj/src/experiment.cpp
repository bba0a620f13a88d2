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

#include "robodca/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <thread>

#include "robodca/transducer.hpp"
#include "robodca/world.hpp"

namespace robodca {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kWorldStream = 0x776f726c64ULL;  // "world"
constexpr std::uint64_t kDcaStream = 0x646361ULL;        // "dca"

std::string fmt(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// Presentation timestamps are whole multiples of the tick; strip accumulated
// representation error so CSV output stays readable.
double tick_time(std::uint64_t tick, double dt) {
  return std::round(static_cast<double>(tick) * dt * 1e6) / 1e6;
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void append_mcav_rows(std::vector<McavRow>& rows, double t, const McavTable& table,
                      const std::set<AntigenType>& touched) {
  for (AntigenType type : touched) {
    const auto& e = table.at(type);
    rows.push_back({t, type, e.mature_count, e.total_count, e.mcav()});
  }
}

DcaParams dca_params(const ExperimentConfig& config, double median) {
  DcaParams p;
  p.weights = config.weights;
  p.population_size = config.population_size;
  p.migration_median = median;
  p.spread_fraction = config.spread_fraction;
  p.max_antigen_per_cell = config.max_antigen_per_cell;
  p.policy = config.policy;
  return p;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view s, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw StreamParseError(line, std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, double median, int run_index) {
  const std::uint64_t m = splitmix64(std::bit_cast<std::uint64_t>(median));
  return base_seed ^ splitmix64(m ^ static_cast<std::uint64_t>(run_index));
}

double default_pamp_scale(const WorldConfig& world) {
  const double standoff = world.wander.d_stop;
  double largest = 0.0;
  double largest_pink = 0.0;
  for (const auto& o : world.pen.obstacles) {
    if (!o.pink) continue;
    const double d = standoff + o.radius;
    const double area = world.sensors.camera.gain * 2.0 * o.radius * o.height / (d * d);
    largest_pink = std::max(largest_pink, area);
    if (o.anomalous()) largest = std::max(largest, area);
  }
  if (largest == 0.0) largest = largest_pink;
  return largest > 0.0 ? 100.0 / largest : 1.0;
}

std::string median_tag(double median) { return "M" + fmt(median); }

RunResult run_single(const ExperimentConfig& config, double median, int run_index) {
  const PenGrid grid(config.world.pen.width, config.world.pen.height);
  return run_single(config, median, run_index, theoretical_labeling(config.world.pen, grid));
}

RunResult run_single(const ExperimentConfig& config, double median, int run_index,
                     const TruthTable& truth) {
  config.validate();
  RunResult result;
  result.median = median;
  result.run_index = run_index;
  result.seed = derive_seed(config.seed, median, run_index);

  World world(config.world, splitmix64(result.seed ^ kWorldStream));
  DcaEngine engine(dca_params(config, median), splitmix64(result.seed ^ kDcaStream));
  const PenGrid grid(config.world.pen.width, config.world.pen.height);
  const VelocityLimits limits{config.world.robot.v_max, config.world.robot.theta_dot_max};
  const double scale = config.pamp_scale.value_or(default_pamp_scale(config.world));

  const double dt = config.world.dt;
  const auto ticks_per_cycle = static_cast<std::uint64_t>(std::llround(config.cycle_interval_s / dt));
  const auto total_ticks = static_cast<std::uint64_t>(std::floor(config.duration_s / dt + 1e-9));
  result.trajectory.reserve(total_ticks);

  for (std::uint64_t tick = 1; tick <= total_ticks; ++tick) {
    world.step();
    const RobotState& robot = world.robot();
    const double t = tick_time(tick, dt);
    result.trajectory.push_back({t, robot.true_pose, robot.odom_pose, robot.v, robot.theta_dot});
    if (tick % ticks_per_cycle != 0) continue;

    const Pose& estimate = config.perfect_localization ? robot.true_pose : robot.odom_pose;
    if (auto batch = emit_antigen(estimate, robot.v, robot.theta_dot, grid, limits)) {
      engine.add_antigen(batch->type, static_cast<std::size_t>(batch->count));
    } else {
      ++result.dropped_emissions;
    }
    engine.set_signals(SignalVector{
        pamp_from_blob(world.blob_area(), scale),
        danger_from_sonar(world.sonar(), config.signal_fov, config.lookup),
        safe_from_lrf(world.lrf(), config.signal_fov, config.lookup),
    });

    std::set<AntigenType> touched;
    for (const Presentation& p : engine.cycle()) {
      result.presentations.push_back({t, p});
      result.final_table.add(p);
      touched.insert(p.antigen);
    }
    append_mcav_rows(result.mcav_series, t, result.final_table, touched);
    ++result.cycles;
    if (!engine.ledger().balanced()) ++result.conservation_violations;
  }

  SeriesOptions opts;
  opts.interval = config.cycle_interval_s;
  opts.threshold = config.mcav_threshold;
  opts.weighting = config.weighting;
  opts.end_time = config.duration_s;
  result.errors = error_series(result.presentations, truth, opts);
  result.guard_interventions = world.guard_interventions();
  result.min_clearance = world.min_clearance();
  return result;
}

std::vector<SweepRow> summarize(std::span<const RunResult> runs) {
  std::vector<SweepRow> rows;
  std::map<double, std::vector<const RunResult*>> by_median;
  std::vector<double> order;
  for (const auto& r : runs) {
    if (!by_median.count(r.median)) order.push_back(r.median);
    by_median[r.median].push_back(&r);
  }
  for (double m : order) {
    const auto& group = by_median[m];
    const std::size_t n = group.front()->errors.size();
    for (std::size_t k = 0; k < n; ++k) {
      SweepRow row{m, group.front()->errors[k].t, 0.0, 0.0};
      for (const RunResult* r : group) {
        row.mean_fp += r->errors.at(k).fp_rate;
        row.mean_fn += r->errors.at(k).fn_rate;
      }
      row.mean_fp /= static_cast<double>(group.size());
      row.mean_fn /= static_cast<double>(group.size());
      rows.push_back(row);
    }
  }
  return rows;
}

SweepResult run_sweep(const ExperimentConfig& config, int jobs) {
  config.validate();
  const PenGrid grid(config.world.pen.width, config.world.pen.height);
  const TruthTable truth = theoretical_labeling(config.world.pen, grid);

  struct Task {
    double median;
    int run;
  };
  std::vector<Task> tasks;
  for (double m : config.medians) {
    for (int r = 0; r < config.runs_per_median; ++r) tasks.push_back({m, r});
  }

  SweepResult sweep;
  sweep.runs.resize(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        sweep.runs[i] = run_single(config, tasks[i].median, tasks[i].run, truth);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int n_threads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(1, tasks.size())));
  {
    std::vector<std::jthread> pool;
    for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i]) continue;
    const std::uint64_t seed = derive_seed(config.seed, tasks[i].median, tasks[i].run);
    std::string msg = median_tag(tasks[i].median) + " run " + std::to_string(tasks[i].run) +
                      " (seed " + std::to_string(seed) + ") failed";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      msg += std::string(": ") + e.what();
    } catch (...) {
    }
    throw RunFailure(msg, seed);
  }

  sweep.summary = summarize(sweep.runs);
  return sweep;
}

std::vector<StreamRecord> parse_stream(std::istream& in) {
  std::vector<StreamRecord> records;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4 && fields.size() != 5) {
      throw StreamParseError(line_no, "expected 't, pamp, danger, safe[, antigen]'");
    }
    StreamRecord rec;
    rec.t = parse_number<double>(fields[0], line_no, "time");
    if (!std::isfinite(rec.t)) throw StreamParseError(line_no, "time must be finite");
    rec.signals = {parse_number<double>(fields[1], line_no, "pamp"),
                   parse_number<double>(fields[2], line_no, "danger"),
                   parse_number<double>(fields[3], line_no, "safe")};
    try {
      validate(rec.signals);
    } catch (const std::invalid_argument& e) {
      throw StreamParseError(line_no, e.what());
    }
    if (!records.empty() && rec.t < records.back().t) {
      throw StreamParseError(line_no, "records must be time-ordered");
    }
    if (fields.size() == 5 && !fields[4].empty()) {
      for (std::string_view item : split(fields[4], ';')) {
        const auto star = item.find('*');
        const auto id = parse_number<std::uint32_t>(trim(item.substr(0, star)), line_no, "antigen id");
        int count = 1;
        if (star != std::string_view::npos) {
          count = parse_number<int>(trim(item.substr(star + 1)), line_no, "antigen count");
          if (count < 1) throw StreamParseError(line_no, "antigen count must be positive");
        }
        rec.antigen.push_back({AntigenType{id}, count});
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<StreamRecord> load_stream(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return parse_stream(in);
}

SyntheticResult run_synthetic(std::span<const StreamRecord> stream, const ExperimentConfig& config,
                              double median) {
  SyntheticResult result;
  result.median = median;
  DcaEngine engine(dca_params(config, median),
                   splitmix64(derive_seed(config.seed, median, 0) ^ kDcaStream));
  for (const StreamRecord& rec : stream) {
    for (const auto& batch : rec.antigen) {
      engine.add_antigen(batch.type, static_cast<std::size_t>(batch.count));
    }
    engine.set_signals(rec.signals);
    std::set<AntigenType> touched;
    for (const Presentation& p : engine.cycle()) {
      result.presentations.push_back({rec.t, p});
      result.table.add(p);
      touched.insert(p.antigen);
    }
    append_mcav_rows(result.mcav_series, rec.t, result.table, touched);
  }
  result.labels = classify(result.table, config.mcav_threshold);
  return result;
}

void write_presentations_csv(std::ostream& out, std::span<const TimedPresentation> log) {
  out << "t,antigen_id,context\n";
  for (const auto& p : log) {
    out << fmt(p.t) << ',' << p.presentation.antigen.id << ','
        << static_cast<int>(p.presentation.context) << '\n';
  }
}

void write_mcav_csv(std::ostream& out, std::span<const McavRow> rows) {
  out << "t,antigen_id,mature_count,total_count,mcav\n";
  for (const auto& r : rows) {
    out << fmt(r.t) << ',' << r.type.id << ',' << r.mature_count << ',' << r.total_count << ','
        << fmt(r.mcav) << '\n';
  }
}

void write_errors_csv(std::ostream& out, std::span<const ErrorRow> rows) {
  out << "t,fp_rate,fn_rate,n_presented_types\n";
  for (const auto& r : rows) {
    out << fmt(r.t) << ',' << fmt(r.fp_rate) << ',' << fmt(r.fn_rate) << ','
        << r.n_presented_types << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRow> rows) {
  out << "t,true_x,true_y,true_heading,odom_x,odom_y,odom_heading,v,theta_dot\n";
  for (const auto& r : rows) {
    out << fmt(r.t) << ',' << fmt(r.true_pose.x) << ',' << fmt(r.true_pose.y) << ','
        << fmt(r.true_pose.heading) << ',' << fmt(r.odom_pose.x) << ',' << fmt(r.odom_pose.y)
        << ',' << fmt(r.odom_pose.heading) << ',' << fmt(r.v) << ',' << fmt(r.theta_dot) << '\n';
  }
}

void write_truth_csv(std::ostream& out, const TruthTable& truth) {
  out << "antigen_id,label\n";
  for (std::size_t i = 0; i < truth.size(); ++i) {
    out << i << ',' << static_cast<int>(truth.labels()[i]) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "median,t,mean_fp,mean_fn\n";
  for (const auto& r : rows) {
    out << fmt(r.median) << ',' << fmt(r.t) << ',' << fmt(r.mean_fp) << ',' << fmt(r.mean_fn)
        << '\n';
  }
}

namespace {

void write_classification_csv(std::ostream& out, const McavTable& table, double threshold,
                              const TruthTable* truth) {
  out << "antigen_id,mature_count,total_count,mcav,label";
  if (truth) out << ",truth";
  out << '\n';
  for (const auto& [type, e] : table.entries()) {
    out << type.id << ',' << e.mature_count << ',' << e.total_count << ',' << fmt(e.mcav()) << ','
        << static_cast<int>(classify(e.mcav(), threshold));
    if (truth) out << ',' << static_cast<int>((*truth)[type]);
    out << '\n';
  }
}

}  // namespace

void write_run(const std::filesystem::path& dir, const RunResult& run, const TruthTable& truth,
               double threshold) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_csv(dir / "presentations.csv");
    write_presentations_csv(out, run.presentations);
  }
  {
    auto out = open_csv(dir / "mcav.csv");
    write_mcav_csv(out, run.mcav_series);
  }
  {
    auto out = open_csv(dir / "errors.csv");
    write_errors_csv(out, run.errors);
  }
  {
    auto out = open_csv(dir / "trajectory.csv");
    write_trajectory_csv(out, run.trajectory);
  }
  {
    auto out = open_csv(dir / "classification.csv");
    write_classification_csv(out, run.final_table, threshold, &truth);
  }
}

void write_sweep(const std::filesystem::path& out, const SweepResult& sweep,
                 const ExperimentConfig& config) {
  std::filesystem::create_directories(out);
  const PenGrid grid(config.world.pen.width, config.world.pen.height);
  const TruthTable truth = theoretical_labeling(config.world.pen, grid);
  for (const auto& run : sweep.runs) {
    write_run(out / median_tag(run.median) / ("run" + std::to_string(run.run_index)), run, truth,
              config.mcav_threshold);
  }
  {
    auto f = open_csv(out / "truth.csv");
    write_truth_csv(f, truth);
  }
  {
    auto f = open_csv(out / "summary.csv");
    write_summary_csv(f, sweep.summary);
  }
  {
    auto f = open_csv(out / "runs.csv");
    f << "median,run,seed,final_fp,final_fn,n_presented_types,presentations,"
         "conservation_violations,dropped_emissions,guard_interventions,min_clearance\n";
    for (const auto& r : sweep.runs) {
      const ErrorRow last = r.errors.empty() ? ErrorRow{} : r.errors.back();
      f << fmt(r.median) << ',' << r.run_index << ',' << r.seed << ',' << fmt(last.fp_rate) << ','
        << fmt(last.fn_rate) << ',' << last.n_presented_types << ',' << r.presentations.size()
        << ',' << r.conservation_violations << ',' << r.dropped_emissions << ','
        << r.guard_interventions << ',' << fmt(r.min_clearance) << '\n';
    }
  }
  {
    auto f = open_csv(out / "effective_config.json");
    f << dump_config(config);
  }
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticResult& result,
                     double threshold) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_csv(dir / "presentations.csv");
    write_presentations_csv(out, result.presentations);
  }
  {
    auto out = open_csv(dir / "mcav.csv");
    write_mcav_csv(out, result.mcav_series);
  }
  {
    auto out = open_csv(dir / "classification.csv");
    write_classification_csv(out, result.table, threshold, nullptr);
  }
}

}  // namespace robodca
