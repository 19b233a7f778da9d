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

#ifndef ICSIZE_CACHE_SIM_HPP
#define ICSIZE_CACHE_SIM_HPP

#include "icsize/estimator.hpp"
#include "icsize/program.hpp"

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace icsize
{

using Address = std::uint64_t;

/// Blocks packed back to back in id order starting at address 0.
struct MemoryLayout
{
  std::vector<Address> start_addr;
  std::uint64_t footprint_bytes = 0;
};

MemoryLayout layout_blocks(const ControlFlowGraph& cfg, const IsaProfile& isa);

/// Calls sink(address) for every instruction fetch of every block visit,
/// in trace order, without materializing the stream.
template <typename Sink>
void for_each_fetch(const BlockTrace& trace, const ControlFlowGraph& cfg, const MemoryLayout& layout,
                    const IsaProfile& isa, Sink&& sink)
{
  validate_trace(trace, cfg);
  const Address width = isa.instruction_width_bytes;
  for (auto id : trace.seq) {
    Address a = layout.start_addr[id];
    for (std::uint32_t k = 0; k < cfg.blocks()[id].length; ++k, a += width)
      sink(a);
  }
}

std::vector<Address> expand_trace(const BlockTrace& trace, const ControlFlowGraph& cfg,
                                  const MemoryLayout& layout, const IsaProfile& isa);

/// Cold direct-mapped cache. Each slot holds the tag of the last line
/// mapped to it; index = line mod num_lines, tag = line / num_lines.
class DirectMappedCache
{
public:
  explicit DirectMappedCache(const CacheConfig& config);

  /// Returns true on a hit; a miss fills the slot.
  bool access(Address addr)
  {
    const std::uint64_t line = addr >> offset_bits_;
    const std::uint64_t index = line & index_mask_;
    const std::uint64_t tag = line >> index_bits_;
    ++accesses_;
    if (valid_[index] && tags_[index] == tag)
      return true;
    valid_[index] = true;
    tags_[index] = tag;
    ++misses_;
    return false;
  }

  std::uint64_t accesses() const noexcept { return accesses_; }
  std::uint64_t misses() const noexcept { return misses_; }

private:
  unsigned offset_bits_;
  unsigned index_bits_;
  std::uint64_t index_mask_;
  std::vector<std::uint64_t> tags_;
  std::vector<bool> valid_;
  std::uint64_t accesses_ = 0;
  std::uint64_t misses_ = 0;
};

struct AccessCounts
{
  std::uint64_t accesses = 0;
  std::uint64_t misses = 0;

  friend bool operator==(const AccessCounts&, const AccessCounts&) = default;
};

/// Throws InputError for an empty stream.
AccessCounts simulate_direct_mapped(std::span<const Address> addresses, const CacheConfig& config);

/// Streams the trace straight into the cache.
AccessCounts simulate_trace(const BlockTrace& trace, const ControlFlowGraph& cfg, const IsaProfile& isa,
                            const CacheConfig& config);

struct TimingModel
{
  double base_cpi = 1.0;
  std::uint64_t miss_penalty_cycles = 10;

  /// Throws InputError unless base_cpi is finite and positive.
  static TimingModel make(double base_cpi, std::uint64_t miss_penalty_cycles);
};

struct SimResult
{
  std::uint64_t accesses = 0;
  std::uint64_t misses = 0;
  double miss_rate = 0.0;
  double cycles = 0.0;
  double ipc = 0.0;
};

/// cycles = accesses * base_cpi + misses * penalty; ipc = accesses / cycles.
SimResult compute_ipc(std::uint64_t accesses, std::uint64_t misses, const TimingModel& timing);

} // namespace icsize

#endif
