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

#ifndef ROBODCA_DCA_HPP
#define ROBODCA_DCA_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <vector>

namespace robodca {

/// Opaque antigen type identifier. The engine never inspects its structure.
struct AntigenType {
  std::uint32_t id = 0;

  friend constexpr auto operator<=>(AntigenType, AntigenType) = default;
};

/// Input signal strengths, each in [0, 100].
struct SignalVector {
  double pamp = 0.0;
  double danger = 0.0;
  double safe = 0.0;
};

/// Throws std::invalid_argument if any component is non-finite or outside [0, 100].
void validate(const SignalVector& s);

/// Cell outputs: costimulation (CSM), semi-mature and mature cytokines.
struct OutputSignals {
  double csm = 0.0;
  double semi = 0.0;
  double mat = 0.0;
};

/// 3x3 weights, rows (csm, semi, mat) over columns (pamp, danger, safe).
///
/// The constructor enforces the sign pattern the maturation logic relies on:
/// every CSM weight positive, the semi row driven by the safe signal alone,
/// and the mature row inhibited by the safe signal.
class WeightMatrix {
 public:
  using Rows = std::array<std::array<double, 3>, 3>;

  enum Row : std::size_t { kCsm = 0, kSemi = 1, kMat = 2 };
  enum Col : std::size_t { kPamp = 0, kDanger = 1, kSafe = 2 };

  explicit WeightMatrix(const Rows& rows);

  /// [[2,1,2],[0,0,1],[2,1,-3]]
  static WeightMatrix defaults();

  double operator()(std::size_t row, std::size_t col) const { return rows_[row][col]; }
  const Rows& rows() const { return rows_; }

 private:
  Rows rows_;
};

OutputSignals fuse_signals(const WeightMatrix& weights, const SignalVector& s);

enum class Context : std::uint8_t { kSemiMature = 0, kMature = 1 };

struct Presentation {
  AntigenType antigen;
  Context context = Context::kSemiMature;

  friend bool operator==(const Presentation&, const Presentation&) = default;
};

struct DendriticCell {
  int id = 0;
  double migration_threshold = 1.0;
  double cum_csm = 0.0;
  double cum_semi = 0.0;
  double cum_mat = 0.0;
  std::vector<AntigenType> antigen_store;

  void accumulate(const OutputSignals& o) {
    cum_csm += o.csm;
    cum_semi += o.semi;
    cum_mat += o.mat;
  }

  /// Clears cumulatives and stored antigen; the threshold is left untouched.
  void reset();
};

/// Semi-mature unless the mature output strictly dominates (ties are semi-mature).
Context maturation_context(const DendriticCell& cell);

/// Uniform migration thresholds on [median (1 - spread), median (1 + spread)].
class ThresholdSampler {
 public:
  ThresholdSampler(double median, double spread_fraction);

  double operator()(std::mt19937_64& rng) const;
  double median() const { return median_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double median_;
  double lower_;
  double upper_;
};

std::vector<DendriticCell> new_population(int n, const ThresholdSampler& sampler,
                                          std::mt19937_64& rng);
std::vector<DendriticCell> new_population(int n, double median, double spread_fraction,
                                          std::uint64_t seed);

/// Signal and antigen store shared by the population.
struct TissueBuffer {
  std::deque<AntigenType> antigen_queue;
  SignalVector current_signals;
};

enum class AccumulationPolicy {
  kEveryCycle,     ///< every immature cell integrates the tissue signals each cycle
  kOnAntigenOnly,  ///< only cells that sampled antigen this cycle integrate signals
};

struct DcaParams {
  WeightMatrix weights = WeightMatrix::defaults();
  int population_size = 100;
  double migration_median = 30.0;
  double spread_fraction = 0.5;
  int max_antigen_per_cell = 1;
  AccumulationPolicy policy = AccumulationPolicy::kEveryCycle;
};

/// Antigen bookkeeping: emitted == queued + held + presented at all times.
struct AntigenLedger {
  std::uint64_t emitted = 0;
  std::uint64_t queued = 0;
  std::uint64_t held = 0;
  std::uint64_t presented = 0;

  bool balanced() const { return emitted == queued + held + presented; }
};

/// One self-contained dendritic cell population with its tissue.
///
/// A cycle visits cells in a fresh seeded permutation. Each cell pulls up to
/// max_antigen_per_cell antigen from the front of the tissue queue, integrates
/// the fused tissue signals (subject to the accumulation policy) and migrates
/// once its cumulative CSM strictly exceeds its threshold. A migrating cell
/// presents every stored antigen with its maturation context, then resets and
/// draws a new threshold.
class DcaEngine {
 public:
  DcaEngine(const DcaParams& params, std::uint64_t seed);
  /// Uses the supplied cells instead of drawing a population.
  DcaEngine(const DcaParams& params, std::vector<DendriticCell> cells, std::uint64_t seed);

  void add_antigen(AntigenType type, std::size_t count = 1);
  void set_signals(const SignalVector& s);

  std::vector<Presentation> cycle();

  const TissueBuffer& tissue() const { return tissue_; }
  std::span<const DendriticCell> cells() const { return cells_; }
  const DcaParams& params() const { return params_; }

  /// Recounts queue and cell stores from scratch.
  AntigenLedger ledger() const;

 private:
  DcaParams params_;
  ThresholdSampler sampler_;
  std::mt19937_64 rng_;
  std::vector<DendriticCell> cells_;
  std::vector<std::size_t> order_;
  TissueBuffer tissue_;
  std::uint64_t emitted_ = 0;
  std::uint64_t presented_ = 0;
};

/// Per-type presentation counts and mature context antigen value.
class McavTable {
 public:
  struct Entry {
    std::uint64_t mature_count = 0;
    std::uint64_t total_count = 0;
    double mcav() const {
      return static_cast<double>(mature_count) / static_cast<double>(total_count);
    }
  };

  void add(const Presentation& p);
  void add(std::span<const Presentation> ps);

  bool contains(AntigenType t) const { return entries_.count(t) != 0; }
  const Entry& at(AntigenType t) const { return entries_.at(t); }
  double mcav(AntigenType t) const { return entries_.at(t).mcav(); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::map<AntigenType, Entry>& entries() const { return entries_; }

 private:
  std::map<AntigenType, Entry> entries_;
};

McavTable compute_mcav(std::span<const Presentation> presentations);

enum class Label : std::uint8_t { kNormal = 0, kAnomalous = 1 };

inline constexpr double kDefaultMcavThreshold = 0.6;

/// mcav <= threshold is normal, above is anomalous.
Label classify(double mcav, double threshold = kDefaultMcavThreshold);
std::map<AntigenType, Label> classify(const McavTable& table,
                                      double threshold = kDefaultMcavThreshold);

}  // namespace robodca

template <>
struct std::hash<robodca::AntigenType> {
  std::size_t operator()(robodca::AntigenType t) const noexcept {
    return std::hash<std::uint32_t>{}(t.id);
  }
};

#endif  // ROBODCA_DCA_HPP
