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

#include "icsize/workload.hpp"

#include "icsize/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace icsize
{

namespace
{

std::vector<BasicBlock> draw_lengths(SplitMix64& rng, const WorkloadSpec& spec, const std::vector<bool>& hot)
{
  const std::uint32_t mid = spec.min_len + (spec.max_len - spec.min_len + 1) / 2;
  std::vector<BasicBlock> blocks(spec.num_blocks);
  for (std::uint32_t i = 0; i < spec.num_blocks; ++i) {
    auto lo = hot[i] ? std::min(mid, spec.max_len) : spec.min_len;
    blocks[i] = {i, static_cast<std::uint32_t>(rng.uniform(lo, spec.max_len))};
  }
  return blocks;
}

Workload loop_nest(const WorkloadSpec& spec)
{
  SplitMix64 rng(spec.seed);
  const std::uint32_t n = spec.num_blocks;
  const auto k = std::clamp<std::uint32_t>(static_cast<std::uint32_t>(std::lround(n / 8.0)), 1, n - 1);
  const std::uint32_t head = (n - k) / 2;
  const std::uint32_t tail = head + k - 1; // always < n - 1

  std::vector<bool> hot(n, false);
  for (auto i = head; i <= tail; ++i)
    hot[i] = true;
  auto blocks = draw_lengths(rng, spec, hot);

  std::set<Edge> edges;
  for (std::uint32_t i = 0; i + 1 < n; ++i)
    edges.insert({i, i + 1});
  edges.insert({tail, head});
  edges.insert({n - 1, 0});

  // iterations per outer pass so that hot visits make up ~hot_fraction
  const double cold = static_cast<double>(n - k);
  const double mean_iters = spec.hot_fraction >= 1.0
                                ? static_cast<double>(spec.trace_len)
                                : spec.hot_fraction * cold / (static_cast<double>(k) * (1.0 - spec.hot_fraction));
  const auto base_iters = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(mean_iters)));
  auto draw_iters = [&] {
    auto spread = base_iters / 4;
    return rng.uniform(std::max<std::uint64_t>(1, base_iters - spread), base_iters + spread);
  };

  BlockTrace trace;
  trace.seq.reserve(spec.trace_len);
  std::uint32_t pos = 0;
  std::uint64_t iters = draw_iters();
  std::uint64_t done = 0;
  while (trace.seq.size() < spec.trace_len) {
    trace.seq.push_back(pos);
    if (pos == tail) {
      if (++done < iters) {
        pos = head;
        continue;
      }
      done = 0;
      iters = draw_iters();
    }
    pos = pos == n - 1 ? 0 : pos + 1;
  }
  return {ControlFlowGraph(std::move(blocks), std::move(edges), 0), std::move(trace)};
}

Workload hot_cold(const WorkloadSpec& spec)
{
  SplitMix64 rng(spec.seed);
  const std::uint32_t n = spec.num_blocks;
  const auto kh = std::clamp<std::uint32_t>(static_cast<std::uint32_t>(std::lround(spec.hot_fraction * n)), 1, n);

  std::vector<std::uint32_t> hot_ids(kh);
  std::vector<bool> hot(n, false);
  for (std::uint32_t j = 0; j < kh; ++j) {
    hot_ids[j] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(j) * n / kh);
    hot[hot_ids[j]] = true;
  }
  std::vector<std::uint32_t> next_hot(n, 0);
  for (std::uint32_t j = 0; j < kh; ++j)
    next_hot[hot_ids[j]] = hot_ids[(j + 1) % kh];

  auto blocks = draw_lengths(rng, spec, hot);

  std::set<Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i)
    edges.insert({i, (i + 1) % n});
  for (auto h : hot_ids)
    edges.insert({h, next_hot[h]});

  // stay in the hot cycle with probability q: a hot sojourn of 1/(1-q)
  // visits against ~gap cold visits per excursion gives a 9:1 split
  const double gap = static_cast<double>(n - kh) / kh;
  const double stay = gap > 0 ? std::clamp(1.0 - 1.0 / (9.0 * gap), 0.0, 0.999) : 0.5;

  BlockTrace trace;
  trace.seq.reserve(spec.trace_len);
  std::uint32_t pos = 0;
  while (trace.seq.size() < spec.trace_len) {
    trace.seq.push_back(pos);
    if (hot[pos] && rng.unit() < stay)
      pos = next_hot[pos];
    else
      pos = (pos + 1) % n;
  }
  return {ControlFlowGraph(std::move(blocks), std::move(edges), 0), std::move(trace)};
}

} // namespace

std::string_view to_string(WorkloadShape s) noexcept
{
  return s == WorkloadShape::LoopNest ? "loopnest" : "hotcold";
}

std::optional<WorkloadShape> parse_shape(std::string_view name) noexcept
{
  if (name == "loopnest")
    return WorkloadShape::LoopNest;
  if (name == "hotcold")
    return WorkloadShape::HotCold;
  return std::nullopt;
}

void validate(const WorkloadSpec& spec)
{
  if (spec.num_blocks < 1)
    throw InputError("workload needs at least one block");
  if (spec.shape == WorkloadShape::LoopNest && spec.num_blocks < 2)
    throw InputError("loopnest workload needs at least 2 blocks");
  if (spec.min_len < 1)
    throw InputError("minimum block length must be at least 1");
  if (spec.min_len > spec.max_len)
    throw InputError("minimum block length exceeds maximum");
  if (!(spec.hot_fraction > 0.0 && spec.hot_fraction <= 1.0))
    throw InputError("hot fraction must be in (0, 1]");
  if (spec.trace_len < 1)
    throw InputError("trace length must be at least 1");
}

Workload generate(const WorkloadSpec& spec)
{
  validate(spec);
  return spec.shape == WorkloadShape::LoopNest ? loop_nest(spec) : hot_cold(spec);
}

} // namespace icsize
