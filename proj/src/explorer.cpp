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

#include "icsize/explorer.hpp"

#include "icsize/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

namespace icsize
{

const SweepEntry* SweepGrid::find(const CacheConfig& config) const
{
  auto it = std::lower_bound(entries.begin(), entries.end(), config,
                             [](const SweepEntry& e, const CacheConfig& c) { return e.config < c; });
  return it != entries.end() && it->config == config ? &*it : nullptr;
}

const SweepEntry& SweepGrid::best() const
{
  if (entries.empty())
    throw InputError("sweep grid is empty");
  const SweepEntry* best = &entries.front();
  for (const auto& e : entries)
    if (e.result.ipc > best->result.ipc)
      best = &e;
  return *best;
}

std::vector<std::uint64_t> pow2_range(std::uint64_t lo, std::uint64_t hi)
{
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 1; p != 0 && p <= hi; p <<= 1)
    if (p >= lo)
      out.push_back(p);
  return out;
}

std::vector<std::uint64_t> default_line_sizes() { return pow2_range(8, 1024); }
std::vector<std::uint64_t> default_num_lines() { return pow2_range(8, 1024); }

SweepGrid sweep(const ControlFlowGraph& cfg, const BlockTrace& trace, const IsaProfile& isa,
                const std::vector<std::uint64_t>& line_sizes, const std::vector<std::uint64_t>& num_lines_set,
                const TimingModel& timing, Execution exec)
{
  if (line_sizes.empty() || num_lines_set.empty())
    throw InputError("sweep range is empty");

  std::set<CacheConfig> unique;
  for (auto ls : line_sizes)
    for (auto nl : num_lines_set)
      unique.emplace(ls, nl);

  SweepGrid grid;
  grid.entries.reserve(unique.size());
  for (const auto& c : unique)
    grid.entries.push_back({c, {}});

  const auto addresses = expand_trace(trace, cfg, layout_blocks(cfg, isa), isa);
  auto run_one = [&](SweepEntry& e) {
    auto counts = simulate_direct_mapped(addresses, e.config);
    e.result = compute_ipc(counts.accesses, counts.misses, timing);
  };

  unsigned workers = exec == Execution::Serial ? 1u : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(grid.entries.size()));
  if (workers <= 1) {
    for (auto& e : grid.entries)
      run_one(e);
    return grid;
  }

  // Each worker writes only into its own claimed slots; order is fixed up front.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < grid.entries.size(); i = next++)
            run_one(grid.entries[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& err : errors)
    if (err)
      std::rethrow_exception(err);
  return grid;
}

const CriterionAccuracy* AccuracyReport::find(Criterion c) const
{
  for (const auto& a : criteria)
    if (a.criterion == c)
      return &a;
  return nullptr;
}

AccuracyReport accuracy(const SweepGrid& grid, const std::map<Criterion, CacheConfig>& estimates)
{
  const auto& best = grid.best();
  AccuracyReport report{{}, best.config, best.result.ipc, std::nullopt};

  for (auto c : all_criteria) {
    auto it = estimates.find(c);
    if (it == estimates.end())
      continue;
    const auto* e = grid.find(it->second);
    if (!e)
      throw InputError(fmt::format("estimate not in sweep grid: {} criterion -> line_size={} num_lines={}",
                                   to_string(c), it->second.line_size_bytes(), it->second.num_lines()));
    CriterionAccuracy acc{c, e->config, e->result.ipc, best.result.ipc, 100.0 * e->result.ipc / best.result.ipc,
                          std::nullopt};
    if (e == &best)
      acc.accuracy_percent = 100.0;
    if (e->config.line_size_bytes() / 2 >= CacheConfig::min_line_size &&
        e->config.num_lines() * 2 <= CacheConfig::max_num_lines) {
      if (const auto* r = grid.find(rebalance_config(e->config, 1)))
        acc.rebalanced = RebalancedIpc{r->config, r->result.ipc, 100.0 * (r->result.ipc - e->result.ipc) / e->result.ipc};
    }
    if (c == Criterion::Dominant)
      report.dominant_meets_floor = acc.accuracy_percent >= dominant_accuracy_floor_percent;
    report.criteria.push_back(acc);
  }
  return report;
}

SizeVariation equal_size_variation(const SweepGrid& grid, std::uint64_t total_bytes)
{
  const SweepEntry* best = nullptr;
  const SweepEntry* worst = nullptr;
  std::size_t n = 0;
  for (const auto& e : grid.entries) {
    if (e.config.total_bytes() != total_bytes)
      continue;
    ++n;
    if (!best || e.result.ipc > best->result.ipc)
      best = &e;
    if (!worst || e.result.ipc < worst->result.ipc)
      worst = &e;
  }
  if (n < 2)
    throw InputError(fmt::format("need at least 2 grid entries of {} bytes, found {}", total_bytes, n));
  return {*best, *worst, 100.0 * (best->result.ipc - worst->result.ipc) / worst->result.ipc};
}

CacheConfig rebalance_config(const CacheConfig& config, unsigned halvings)
{
  if (halvings == 0)
    throw InputError("rebalance needs at least one halving");
  if (halvings >= 32)
    throw InputError("too many halvings");
  const std::uint64_t factor = std::uint64_t{1} << halvings;
  if (config.line_size_bytes() / factor < CacheConfig::min_line_size || config.line_size_bytes() % factor != 0)
    throw InputError(fmt::format("rebalancing {} B lines by {} halvings goes below the minimum line size {}",
                                 config.line_size_bytes(), halvings, CacheConfig::min_line_size));
  if (config.num_lines() > CacheConfig::max_num_lines / factor)
    throw InputError(fmt::format("rebalancing {} lines by {} halvings exceeds {} lines", config.num_lines(),
                                 halvings, CacheConfig::max_num_lines));
  return CacheConfig(config.line_size_bytes() / factor, config.num_lines() * factor);
}

std::string format_real(double value)
{
  return fmt::format("{:.6f}", value);
}

std::string sweep_csv(const SweepGrid& grid)
{
  std::string out = "line_size,num_lines,total_bytes,accesses,misses,miss_rate,cycles,ipc\n";
  for (const auto& e : grid.entries) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", e.config.line_size_bytes(), e.config.num_lines(),
                       e.config.total_bytes(), e.result.accesses, e.result.misses, format_real(e.result.miss_rate),
                       format_real(e.result.cycles), format_real(e.result.ipc));
  }
  return out;
}

std::size_t write_sweep_csv(const SweepGrid& grid, std::ostream& out)
{
  auto text = sweep_csv(grid);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw InputError("failed to write sweep CSV");
  return text.size();
}

std::size_t write_sweep_csv(const SweepGrid& grid, const std::string& path)
{
  auto text = sweep_csv(grid);
  write_file(path, text);
  return text.size();
}

nlohmann::ordered_json to_json(const AccuracyReport& report)
{
  using nlohmann::ordered_json;
  ordered_json j;
  j["best"] = {{"line_size", report.best_config.line_size_bytes()},
               {"num_lines", report.best_config.num_lines()},
               {"total_kb", report.best_config.total_kb()},
               {"ipc", report.max_ipc}};
  ordered_json rows = ordered_json::array();
  for (const auto& a : report.criteria) {
    ordered_json row{{"criterion", to_string(a.criterion)},
                     {"line_size", a.config.line_size_bytes()},
                     {"num_lines", a.config.num_lines()},
                     {"total_kb", a.config.total_kb()},
                     {"ipc", a.ipc},
                     {"max_ipc", a.max_ipc},
                     {"accuracy_percent", a.accuracy_percent}};
    if (a.rebalanced)
      row["rebalanced"] = {{"line_size", a.rebalanced->config.line_size_bytes()},
                           {"num_lines", a.rebalanced->config.num_lines()},
                           {"ipc", a.rebalanced->ipc},
                           {"ipc_delta_percent", a.rebalanced->ipc_delta_percent}};
    else
      row["rebalanced"] = nullptr;
    rows.push_back(std::move(row));
  }
  j["criteria"] = std::move(rows);
  if (report.dominant_meets_floor)
    j["dominant_meets_floor"] = *report.dominant_meets_floor;
  j["dominant_floor_percent"] = dominant_accuracy_floor_percent;
  return j;
}

std::string to_text(const AccuracyReport& report)
{
  std::string out = fmt::format("best line_size={} num_lines={} total_kb={} ipc={}\n",
                                report.best_config.line_size_bytes(), report.best_config.num_lines(),
                                report.best_config.total_kb(), format_real(report.max_ipc));
  for (const auto& a : report.criteria) {
    out += fmt::format("{} line_size={} num_lines={} total_kb={} ipc={} max_ipc={} accuracy_percent={}",
                       to_string(a.criterion), a.config.line_size_bytes(), a.config.num_lines(), a.config.total_kb(),
                       format_real(a.ipc), format_real(a.max_ipc), format_real(a.accuracy_percent));
    if (a.rebalanced)
      out += fmt::format(" rebalanced={}x{} rebalanced_ipc={} ipc_delta_percent={}",
                         a.rebalanced->config.line_size_bytes(), a.rebalanced->config.num_lines(),
                         format_real(a.rebalanced->ipc), format_real(a.rebalanced->ipc_delta_percent));
    out += '\n';
  }
  if (report.dominant_meets_floor)
    out += fmt::format("dominant_meets_{}pct_floor={}\n", dominant_accuracy_floor_percent,
                       *report.dominant_meets_floor ? "yes" : "no");
  return out;
}

} // namespace icsize
