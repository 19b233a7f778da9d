/*
 *    Copyright 2026 The icsize Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ICSIZE_EXPLORER_HPP
#define ICSIZE_EXPLORER_HPP

#include "icsize/cache_sim.hpp"
#include "icsize/estimator.hpp"
#include "icsize/program.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace icsize
{

struct SweepEntry
{
  CacheConfig config;
  SimResult result;
};

/// One entry per swept configuration, sorted by (line size, num lines).
struct SweepGrid
{
  std::vector<SweepEntry> entries;

  const SweepEntry* find(const CacheConfig& config) const;
  const SweepEntry& best() const; ///< highest ipc; first in canonical order on ties
};

enum class Execution
{
  Serial,
  Parallel
};

/// All powers of two in [lo, hi].
std::vector<std::uint64_t> pow2_range(std::uint64_t lo, std::uint64_t hi);

/// The default 7 x 7 grid: line sizes and line counts 8..1024.
std::vector<std::uint64_t> default_line_sizes();
std::vector<std::uint64_t> default_num_lines();

/// Simulates every (line size, num lines) pair on the same address stream.
/// Throws InputError on an empty range or a value outside CacheConfig bounds.
SweepGrid sweep(const ControlFlowGraph& cfg, const BlockTrace& trace, const IsaProfile& isa,
                const std::vector<std::uint64_t>& line_sizes, const std::vector<std::uint64_t>& num_lines_set,
                const TimingModel& timing, Execution exec = Execution::Parallel);

/// Floor on dominant-criterion accuracy treated as "near best".
inline constexpr double dominant_accuracy_floor_percent = 68.0;

struct RebalancedIpc
{
  CacheConfig config;
  double ipc = 0.0;
  double ipc_delta_percent = 0.0; ///< 100 * (rebalanced - estimated) / estimated
};

struct CriterionAccuracy
{
  Criterion criterion = Criterion::Dominant;
  CacheConfig config;
  double ipc = 0.0;
  double max_ipc = 0.0;
  double accuracy_percent = 0.0;
  /// Same total size with half the line size, when that config is in the grid.
  std::optional<RebalancedIpc> rebalanced;
};

struct AccuracyReport
{
  std::vector<CriterionAccuracy> criteria; ///< in all_criteria order, estimated ones only
  CacheConfig best_config;
  double max_ipc = 0.0;
  std::optional<bool> dominant_meets_floor;

  const CriterionAccuracy* find(Criterion c) const;
};

/// Throws InputError("estimate not in sweep grid ...") when an estimate was
/// not swept.
AccuracyReport accuracy(const SweepGrid& grid, const std::map<Criterion, CacheConfig>& estimates);

struct SizeVariation
{
  SweepEntry best;
  SweepEntry worst;
  double variation_percent = 0.0; ///< 100 * (best - worst) / worst
};

/// Best vs worst ipc among grid entries of exactly `total_bytes`.
SizeVariation equal_size_variation(const SweepGrid& grid, std::uint64_t total_bytes);

/// Halves the line size `halvings` times, doubling the line count each time.
CacheConfig rebalance_config(const CacheConfig& config, unsigned halvings);

/// Fixed-point with 6 decimals, round-half-even on the binary value.
std::string format_real(double value);

std::string sweep_csv(const SweepGrid& grid);
std::size_t write_sweep_csv(const SweepGrid& grid, std::ostream& out);
/// Throws InputError if the file cannot be written.
std::size_t write_sweep_csv(const SweepGrid& grid, const std::string& path);

nlohmann::ordered_json to_json(const AccuracyReport& report);
std::string to_text(const AccuracyReport& report);

} // namespace icsize

#endif
