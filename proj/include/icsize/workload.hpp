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

#ifndef ICSIZE_WORKLOAD_HPP
#define ICSIZE_WORKLOAD_HPP

#include "icsize/program.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace icsize
{

/// SplitMix64. The recurrence is written out so generated workloads are
/// identical on every platform and in every language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform(lo, hi) is lo + next() % (hi - lo + 1); unit() is
/// (next() >> 11) * 2^-53.
class SplitMix64
{
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept
  {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) noexcept { return lo + next() % (hi - lo + 1); }
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  std::uint64_t state_;
};

enum class WorkloadShape
{
  LoopNest, ///< chain with one hot inner loop and an outer back-edge
  HotCold   ///< a few hot blocks linked in a cycle take ~90% of visits
};

std::string_view to_string(WorkloadShape s) noexcept;
std::optional<WorkloadShape> parse_shape(std::string_view name) noexcept;

struct WorkloadSpec
{
  std::uint64_t seed = 1;
  std::uint32_t num_blocks = 32;
  std::uint32_t min_len = 2;
  std::uint32_t max_len = 16;
  double hot_fraction = 0.8;
  std::uint64_t trace_len = 10000;
  WorkloadShape shape = WorkloadShape::LoopNest;
};

/// Throws InputError for an invalid spec.
void validate(const WorkloadSpec& spec);

struct Workload
{
  ControlFlowGraph cfg;
  BlockTrace trace;
};

/// Deterministic in `spec`. The trace is strict-valid against the graph.
/// Hot blocks draw lengths from the upper half of [min_len, max_len] so the
/// dominant block is long while the weighted mean stays lower.
Workload generate(const WorkloadSpec& spec);

} // namespace icsize

#endif
