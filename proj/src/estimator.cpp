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

#include "icsize/estimator.hpp"

#include "icsize/error.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace icsize
{

namespace
{

void check_profile(std::span<const BasicBlock> blocks, const ExecutionProfile& profile)
{
  if (blocks.empty())
    throw InputError("empty block list");
  if (profile.size() != blocks.size())
    throw InputError("profile covers " + std::to_string(profile.size()) + " blocks, program has " +
                     std::to_string(blocks.size()));
  if (profile.total() == 0)
    throw InputError("execution profile has no positive frequency");
}

} // namespace

std::string_view to_string(Criterion c) noexcept
{
  switch (c) {
  case Criterion::Average:
    return "average";
  case Criterion::Dominant:
    return "dominant";
  case Criterion::Largest:
    return "largest";
  }
  return "?";
}

std::optional<Criterion> parse_criterion(std::string_view name) noexcept
{
  for (auto c : all_criteria)
    if (to_string(c) == name)
      return c;
  return std::nullopt;
}

CacheConfig::CacheConfig(std::uint64_t line_size_bytes, std::uint64_t num_lines)
    : line_size_(line_size_bytes), num_lines_(num_lines)
{
  if (!is_pow2(line_size_))
    throw InputError("line size " + std::to_string(line_size_) + " is not a power of two");
  if (!is_pow2(num_lines_))
    throw InputError("number of lines " + std::to_string(num_lines_) + " is not a power of two");
  if (line_size_ < min_line_size || line_size_ > max_line_size)
    throw InputError("line size " + std::to_string(line_size_) + " outside [" +
                     std::to_string(min_line_size) + ", " + std::to_string(max_line_size) + "] bytes");
  if (num_lines_ < min_num_lines || num_lines_ > max_num_lines)
    throw InputError("number of lines " + std::to_string(num_lines_) + " outside [" +
                     std::to_string(min_num_lines) + ", " + std::to_string(max_num_lines) + "]");
}

double weighted_average_length(std::span<const BasicBlock> blocks, const ExecutionProfile& profile,
                               AverageMode mode)
{
  check_profile(blocks, profile);
  // long double holds 64-bit counts exactly
  long double weighted = 0;
  long double weight = 0;
  for (const auto& b : blocks) {
    auto f = static_cast<long double>(profile[b.id]);
    weighted += f * b.length;
    weight += f;
  }
  if (mode == AverageMode::Literal)
    weight = static_cast<long double>(blocks.size());
  return static_cast<double>(weighted / weight);
}

LengthChoice dominant_length(std::span<const BasicBlock> blocks, const ExecutionProfile& profile)
{
  check_profile(blocks, profile);
  __extension__ typedef unsigned __int128 Product;
  std::optional<LengthChoice> best;
  Product best_product = 0;
  for (const auto& b : blocks) {
    Product p = static_cast<Product>(profile[b.id]) * b.length;
    bool better = !best || p > best_product ||
                  (p == best_product && (b.length > best->length ||
                                         (b.length == best->length && b.id < best->block_id)));
    if (better) {
      best = LengthChoice{b.length, b.id};
      best_product = p;
    }
  }
  return *best;
}

LengthChoice largest_length(std::span<const BasicBlock> blocks)
{
  if (blocks.empty())
    throw InputError("empty block list");
  LengthChoice best{blocks.front().length, blocks.front().id};
  for (const auto& b : blocks) {
    if (b.length > best.length || (b.length == best.length && b.id < best.block_id))
      best = {b.length, b.id};
  }
  return best;
}

BlockLengthMetrics compute_metrics(const ControlFlowGraph& cfg, const ExecutionProfile& profile, AverageMode mode)
{
  auto dom = dominant_length(cfg.blocks(), profile);
  auto big = largest_length(cfg.blocks());
  return BlockLengthMetrics{weighted_average_length(cfg.blocks(), profile, mode), dom.length, dom.block_id,
                            big.length, big.block_id};
}

std::uint64_t round_pow2_nearest_tie_low(std::uint64_t x)
{
  if (x < 1)
    throw InputError("cannot round " + std::to_string(x) + " to a power of two");
  std::uint64_t low = std::bit_floor(x);
  if (low == x)
    return x;
  if (low == (std::uint64_t{1} << 63))
    return low;
  std::uint64_t high = low << 1;
  return (high - x) < (x - low) ? high : low;
}

std::uint64_t ceil_pow2(std::uint64_t n)
{
  if (n < 1)
    throw InputError("cannot round " + std::to_string(n) + " up to a power of two");
  if (n > (std::uint64_t{1} << 63))
    throw InputError("value too large to round up to a power of two");
  return std::bit_ceil(n);
}

std::uint64_t estimate_num_lines(const ControlFlowGraph& cfg)
{
  return ceil_pow2(cfg.size());
}

std::uint64_t estimate_line_size(const BlockLengthMetrics& metrics, Criterion criterion, const IsaProfile& isa)
{
  // revalidates widths of hand-built profiles
  auto width = IsaProfile::make(isa.name, isa.instruction_width_bytes).instruction_width_bytes;
  double metric = 0;
  switch (criterion) {
  case Criterion::Average:
    metric = metrics.average;
    break;
  case Criterion::Dominant:
    metric = metrics.dominant;
    break;
  case Criterion::Largest:
    metric = metrics.largest;
    break;
  }
  if (!(metric > 0) || !std::isfinite(metric))
    throw InputError("block length metric must be positive");
  auto bytes = static_cast<std::uint64_t>(std::floor(metric * width + 0.5));
  if (bytes < 1)
    bytes = 1;
  return round_pow2_nearest_tie_low(bytes);
}

Estimate estimate_config(const ControlFlowGraph& cfg, const ExecutionProfile& profile, Criterion criterion,
                         const IsaProfile& isa, AverageMode mode)
{
  auto metrics = compute_metrics(cfg, profile, mode);
  return Estimate{CacheConfig(estimate_line_size(metrics, criterion, isa), estimate_num_lines(cfg)), metrics};
}

} // namespace icsize
