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

#include "icsize/cache_sim.hpp"

#include "icsize/error.hpp"

#include <cmath>
#include <string>

namespace icsize
{

MemoryLayout layout_blocks(const ControlFlowGraph& cfg, const IsaProfile& isa)
{
  MemoryLayout layout;
  layout.start_addr.reserve(cfg.size());
  Address next = 0;
  for (const auto& b : cfg.blocks()) {
    layout.start_addr.push_back(next);
    next += static_cast<Address>(b.length) * isa.instruction_width_bytes;
  }
  layout.footprint_bytes = next;
  return layout;
}

std::vector<Address> expand_trace(const BlockTrace& trace, const ControlFlowGraph& cfg, const MemoryLayout& layout,
                                  const IsaProfile& isa)
{
  std::vector<Address> out;
  for_each_fetch(trace, cfg, layout, isa, [&](Address a) { out.push_back(a); });
  return out;
}

DirectMappedCache::DirectMappedCache(const CacheConfig& config)
    : offset_bits_(static_cast<unsigned>(std::countr_zero(config.line_size_bytes()))),
      index_bits_(static_cast<unsigned>(std::countr_zero(config.num_lines()))),
      index_mask_(config.num_lines() - 1),
      tags_(config.num_lines(), 0),
      valid_(config.num_lines(), false)
{
}

AccessCounts simulate_direct_mapped(std::span<const Address> addresses, const CacheConfig& config)
{
  if (addresses.empty())
    throw InputError("address stream is empty");
  DirectMappedCache cache(config);
  for (auto a : addresses)
    cache.access(a);
  return {cache.accesses(), cache.misses()};
}

AccessCounts simulate_trace(const BlockTrace& trace, const ControlFlowGraph& cfg, const IsaProfile& isa,
                            const CacheConfig& config)
{
  auto layout = layout_blocks(cfg, isa);
  DirectMappedCache cache(config);
  for_each_fetch(trace, cfg, layout, isa, [&](Address a) { cache.access(a); });
  return {cache.accesses(), cache.misses()};
}

TimingModel TimingModel::make(double base_cpi, std::uint64_t miss_penalty_cycles)
{
  if (!std::isfinite(base_cpi) || base_cpi <= 0)
    throw InputError("base CPI must be positive, got " + std::to_string(base_cpi));
  return TimingModel{base_cpi, miss_penalty_cycles};
}

SimResult compute_ipc(std::uint64_t accesses, std::uint64_t misses, const TimingModel& timing)
{
  if (accesses == 0)
    throw InputError("no instruction fetches to time");
  if (misses > accesses)
    throw InputError("misses (" + std::to_string(misses) + ") exceed accesses (" + std::to_string(accesses) + ")");
  TimingModel::make(timing.base_cpi, timing.miss_penalty_cycles);

  SimResult r;
  r.accesses = accesses;
  r.misses = misses;
  r.miss_rate = static_cast<double>(misses) / static_cast<double>(accesses);
  r.cycles = static_cast<double>(accesses) * timing.base_cpi +
             static_cast<double>(misses) * static_cast<double>(timing.miss_penalty_cycles);
  r.ipc = static_cast<double>(accesses) / r.cycles;
  return r;
}

} // namespace icsize
