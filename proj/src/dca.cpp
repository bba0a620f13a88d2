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

#include "robodca/dca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace robodca {

namespace {

void check_component(double v, const char* name) {
  if (!std::isfinite(v) || v < 0.0 || v > 100.0) {
    throw std::invalid_argument(std::string("signal '") + name + "' must be finite and in [0, 100]");
  }
}

}  // namespace

void validate(const SignalVector& s) {
  check_component(s.pamp, "pamp");
  check_component(s.danger, "danger");
  check_component(s.safe, "safe");
}

WeightMatrix::WeightMatrix(const Rows& rows) : rows_(rows) {
  for (const auto& row : rows_) {
    for (double w : row) {
      if (!std::isfinite(w)) throw std::invalid_argument("weights must be finite");
    }
  }
  const auto& csm = rows_[kCsm];
  if (!(csm[kPamp] > 0 && csm[kDanger] > 0 && csm[kSafe] > 0)) {
    throw std::invalid_argument("csm weights must all be positive");
  }
  const auto& semi = rows_[kSemi];
  if (!(semi[kPamp] == 0 && semi[kDanger] == 0 && semi[kSafe] > 0)) {
    throw std::invalid_argument("semi-mature weights must be (0, 0, positive)");
  }
  const auto& mat = rows_[kMat];
  if (!(mat[kPamp] > 0 && mat[kDanger] > 0 && mat[kSafe] < 0)) {
    throw std::invalid_argument("mature weights must be (positive, positive, negative)");
  }
}

WeightMatrix WeightMatrix::defaults() {
  return WeightMatrix(Rows{{{2.0, 1.0, 2.0}, {0.0, 0.0, 1.0}, {2.0, 1.0, -3.0}}});
}

OutputSignals fuse_signals(const WeightMatrix& weights, const SignalVector& s) {
  validate(s);
  const std::array<double, 3> in{s.pamp, s.danger, s.safe};
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) out[i] += weights(i, j) * in[j];
  }
  return {out[0], out[1], out[2]};
}

void DendriticCell::reset() {
  cum_csm = 0.0;
  cum_semi = 0.0;
  cum_mat = 0.0;
  antigen_store.clear();
}

Context maturation_context(const DendriticCell& cell) {
  return cell.cum_semi < cell.cum_mat ? Context::kMature : Context::kSemiMature;
}

ThresholdSampler::ThresholdSampler(double median, double spread_fraction)
    : median_(median),
      lower_(median * (1.0 - spread_fraction)),
      upper_(median * (1.0 + spread_fraction)) {
  if (!std::isfinite(median) || median <= 0.0) {
    throw std::invalid_argument("migration median must be positive");
  }
  if (!(spread_fraction >= 0.0 && spread_fraction < 1.0)) {
    throw std::invalid_argument("spread fraction must lie in [0, 1)");
  }
}

double ThresholdSampler::operator()(std::mt19937_64& rng) const {
  if (lower_ == upper_) return median_;
  return std::uniform_real_distribution<double>(lower_, upper_)(rng);
}

std::vector<DendriticCell> new_population(int n, const ThresholdSampler& sampler,
                                          std::mt19937_64& rng) {
  if (n < 1) throw std::invalid_argument("population size must be at least 1");
  std::vector<DendriticCell> cells(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cells[i].id = i;
    cells[i].migration_threshold = sampler(rng);
  }
  return cells;
}

std::vector<DendriticCell> new_population(int n, double median, double spread_fraction,
                                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return new_population(n, ThresholdSampler(median, spread_fraction), rng);
}

DcaEngine::DcaEngine(const DcaParams& params, std::uint64_t seed)
    : params_(params),
      sampler_(params.migration_median, params.spread_fraction),
      rng_(seed) {
  cells_ = new_population(params_.population_size, sampler_, rng_);
  order_.resize(cells_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (params_.max_antigen_per_cell < 1) {
    throw std::invalid_argument("max_antigen_per_cell must be at least 1");
  }
}

DcaEngine::DcaEngine(const DcaParams& params, std::vector<DendriticCell> cells,
                     std::uint64_t seed)
    : params_(params),
      sampler_(params.migration_median, params.spread_fraction),
      rng_(seed),
      cells_(std::move(cells)) {
  if (cells_.empty()) throw std::invalid_argument("population must not be empty");
  if (params_.max_antigen_per_cell < 1) {
    throw std::invalid_argument("max_antigen_per_cell must be at least 1");
  }
  params_.population_size = static_cast<int>(cells_.size());
  order_.resize(cells_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
}

void DcaEngine::add_antigen(AntigenType type, std::size_t count) {
  tissue_.antigen_queue.insert(tissue_.antigen_queue.end(), count, type);
  emitted_ += count;
}

void DcaEngine::set_signals(const SignalVector& s) {
  validate(s);
  tissue_.current_signals = s;
}

std::vector<Presentation> DcaEngine::cycle() {
  std::vector<Presentation> out;
  const OutputSignals fused = fuse_signals(params_.weights, tissue_.current_signals);
  const auto quota = static_cast<std::size_t>(params_.max_antigen_per_cell);

  std::shuffle(order_.begin(), order_.end(), rng_);
  for (std::size_t idx : order_) {
    DendriticCell& cell = cells_[idx];
    std::size_t taken = 0;
    auto& queue = tissue_.antigen_queue;
    while (taken < quota && !queue.empty()) {
      cell.antigen_store.push_back(queue.front());
      queue.pop_front();
      ++taken;
    }
    if (params_.policy == AccumulationPolicy::kEveryCycle || taken > 0) {
      cell.accumulate(fused);
    }
    if (cell.cum_csm > cell.migration_threshold) {
      const Context ctx = maturation_context(cell);
      for (AntigenType a : cell.antigen_store) out.push_back({a, ctx});
      presented_ += cell.antigen_store.size();
      cell.reset();
      cell.migration_threshold = sampler_(rng_);
    }
  }
  return out;
}

AntigenLedger DcaEngine::ledger() const {
  AntigenLedger l;
  l.emitted = emitted_;
  l.presented = presented_;
  l.queued = tissue_.antigen_queue.size();
  for (const auto& c : cells_) l.held += c.antigen_store.size();
  return l;
}

void McavTable::add(const Presentation& p) {
  Entry& e = entries_[p.antigen];
  ++e.total_count;
  if (p.context == Context::kMature) ++e.mature_count;
}

void McavTable::add(std::span<const Presentation> ps) {
  for (const auto& p : ps) add(p);
}

McavTable compute_mcav(std::span<const Presentation> presentations) {
  McavTable table;
  table.add(presentations);
  return table;
}

Label classify(double mcav, double threshold) {
  return mcav > threshold ? Label::kAnomalous : Label::kNormal;
}

std::map<AntigenType, Label> classify(const McavTable& table, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw std::invalid_argument("MCAV threshold must lie in [0, 1]");
  }
  std::map<AntigenType, Label> labels;
  for (const auto& [type, entry] : table.entries()) {
    labels.emplace(type, classify(entry.mcav(), threshold));
  }
  return labels;
}

}  // namespace robodca
