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

#ifndef ICSIZE_ESTIMATOR_HPP
#define ICSIZE_ESTIMATOR_HPP

#include "icsize/program.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace icsize
{

enum class Criterion
{
  Average,
  Dominant,
  Largest
};

inline constexpr std::array<Criterion, 3> all_criteria{Criterion::Average, Criterion::Dominant,
                                                       Criterion::Largest};

std::string_view to_string(Criterion c) noexcept;
/// Accepts "average", "dominant", "largest" (case-sensitive).
std::optional<Criterion> parse_criterion(std::string_view name) noexcept;

/// Instruction-cache geometry. Both fields are powers of two in
/// [8, 4096] bytes and [1, 65536] lines respectively.
class CacheConfig
{
public:
  static constexpr std::uint64_t min_line_size = 8;
  static constexpr std::uint64_t max_line_size = 4096;
  static constexpr std::uint64_t min_num_lines = 1;
  static constexpr std::uint64_t max_num_lines = 65536;

  /// Throws InputError on a non-power-of-two or out-of-bounds value.
  CacheConfig(std::uint64_t line_size_bytes, std::uint64_t num_lines);

  std::uint64_t line_size_bytes() const noexcept { return line_size_; }
  std::uint64_t num_lines() const noexcept { return num_lines_; }
  std::uint64_t total_bytes() const noexcept { return line_size_ * num_lines_; }
  double total_kb() const noexcept { return static_cast<double>(total_bytes()) / 1024.0; }

  friend auto operator<=>(const CacheConfig&, const CacheConfig&) = default;

private:
  std::uint64_t line_size_;
  std::uint64_t num_lines_;
};

struct BlockLengthMetrics
{
  double average = 0.0;
  std::uint32_t dominant = 0;
  BlockId dominant_block_id = 0;
  std::uint32_t largest = 0;
  BlockId largest_block_id = 0;
};

struct LengthChoice
{
  std::uint32_t length = 0;
  BlockId block_id = 0;

  friend bool operator==(const LengthChoice&, const LengthChoice&) = default;
};

enum class AverageMode
{
  Weighted, ///< sum(f * len) / sum(f)
  Literal   ///< sum(f * len) / n, the formula as printed; kept for auditing
};

constexpr bool is_pow2(std::uint64_t x) noexcept { return x != 0 && (x & (x - 1)) == 0; }

/// Frequency-weighted mean block length. Throws InputError for an all-zero
/// profile or a profile whose size differs from the block list.
double weighted_average_length(std::span<const BasicBlock> blocks, const ExecutionProfile& profile,
                               AverageMode mode = AverageMode::Weighted);

/// Length of the block with the largest frequency * length product.
/// Ties on the product go to the longer block, then to the smaller id.
LengthChoice dominant_length(std::span<const BasicBlock> blocks, const ExecutionProfile& profile);

/// Longest block regardless of frequency; ties go to the smaller id.
LengthChoice largest_length(std::span<const BasicBlock> blocks);

BlockLengthMetrics compute_metrics(const ControlFlowGraph& cfg, const ExecutionProfile& profile,
                                   AverageMode mode = AverageMode::Weighted);

/// Nearest power of two by linear distance; the midpoint 3*2^k goes to 2^k.
std::uint64_t round_pow2_nearest_tie_low(std::uint64_t x);

/// Smallest power of two >= n.
std::uint64_t ceil_pow2(std::uint64_t n);

/// One line per basic block, rounded up to a power of two.
std::uint64_t estimate_num_lines(const ControlFlowGraph& cfg);

/// metric * width, rounded half-up to an integer, then to the nearest power
/// of two. Not bounds-checked; `estimate_config` applies the bounds.
std::uint64_t estimate_line_size(const BlockLengthMetrics& metrics, Criterion criterion,
                                 const IsaProfile& isa);

struct Estimate
{
  CacheConfig config;
  BlockLengthMetrics metrics;
};

Estimate estimate_config(const ControlFlowGraph& cfg, const ExecutionProfile& profile, Criterion criterion,
                         const IsaProfile& isa, AverageMode mode = AverageMode::Weighted);

} // namespace icsize

#endif
