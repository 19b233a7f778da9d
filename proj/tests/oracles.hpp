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

// Test-only reference implementations and random generators. Nothing here
// calls into the library code paths it is used to check.

#ifndef ICSIZE_TESTS_ORACLES_HPP
#define ICSIZE_TESTS_ORACLES_HPP

#include "icsize/program.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle
{

using icsize::BasicBlock;
using icsize::BlockId;
using icsize::BlockTrace;
using icsize::ControlFlowGraph;
using icsize::Edge;

inline std::string data_path(const std::string& name)
{
  return std::string(ICSIZE_TEST_DATA_DIR) + "/" + name;
}

/// Per-block start addresses by running sum.
inline std::vector<std::uint64_t> prefix_starts(const std::vector<std::uint32_t>& lengths, std::uint64_t width)
{
  std::vector<std::uint64_t> out;
  std::uint64_t sum = 0;
  for (auto l : lengths) {
    out.push_back(sum);
    sum += l * width;
  }
  return out;
}

struct NaiveResult
{
  std::uint64_t accesses = 0;
  std::uint64_t misses = 0;
};

/// Direct-mapped reference: expands the trace itself, uses plain division
/// and a map of occupied slots.
inline NaiveResult naive_simulate(const std::vector<std::uint32_t>& lengths, const std::vector<BlockId>& trace,
                                  std::uint64_t width, std::uint64_t line_size, std::uint64_t num_lines)
{
  auto starts = prefix_starts(lengths, width);
  std::map<std::uint64_t, std::uint64_t> slots;
  NaiveResult r;
  for (auto id : trace) {
    for (std::uint32_t k = 0; k < lengths[id]; ++k) {
      std::uint64_t addr = starts[id] + k * width;
      std::uint64_t line = addr / line_size;
      std::uint64_t slot = line % num_lines;
      std::uint64_t tag = line / num_lines;
      ++r.accesses;
      auto it = slots.find(slot);
      if (it == slots.end() || it->second != tag) {
        ++r.misses;
        slots[slot] = tag;
      }
    }
  }
  return r;
}

inline std::uint64_t distinct_lines(const std::vector<std::uint32_t>& lengths, const std::vector<BlockId>& trace,
                                    std::uint64_t width, std::uint64_t line_size)
{
  auto starts = prefix_starts(lengths, width);
  std::set<std::uint64_t> lines;
  for (auto id : trace)
    for (std::uint32_t k = 0; k < lengths[id]; ++k)
      lines.insert((starts[id] + k * width) / line_size);
  return lines.size();
}

inline std::vector<std::uint64_t> count_occurrences(const std::vector<BlockId>& trace, std::size_t n)
{
  std::vector<std::uint64_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (auto id : trace)
      out[i] += id == i;
  return out;
}

inline std::vector<std::uint32_t> random_lengths(std::mt19937_64& rng, std::size_t n, std::uint32_t max_len)
{
  std::uniform_int_distribution<std::uint32_t> len(1, max_len);
  std::vector<std::uint32_t> out(n);
  for (auto& l : out)
    l = len(rng);
  return out;
}

inline std::vector<BasicBlock> to_blocks(const std::vector<std::uint32_t>& lengths)
{
  std::vector<BasicBlock> out;
  for (std::size_t i = 0; i < lengths.size(); ++i)
    out.push_back({static_cast<BlockId>(i), lengths[i]});
  return out;
}

/// Random graph where every block has at least one successor, so random
/// walks from the entry never get stuck.
inline ControlFlowGraph random_cfg(std::mt19937_64& rng, std::size_t n, std::uint32_t max_len)
{
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::set<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    edges.insert({static_cast<BlockId>(i), static_cast<BlockId>(pick(rng))});
    if (rng() % 2)
      edges.insert({static_cast<BlockId>(i), static_cast<BlockId>(pick(rng))});
  }
  return ControlFlowGraph(to_blocks(random_lengths(rng, n, max_len)), edges, static_cast<BlockId>(pick(rng)));
}

inline BlockTrace random_walk(std::mt19937_64& rng, const ControlFlowGraph& cfg, std::size_t len)
{
  std::map<BlockId, std::vector<BlockId>> succ;
  for (auto [s, d] : cfg.edges())
    succ[s].push_back(d);
  BlockTrace t;
  BlockId pos = cfg.entry();
  for (std::size_t k = 0; k < len; ++k) {
    t.seq.push_back(pos);
    const auto& next = succ.at(pos);
    pos = next[rng() % next.size()];
  }
  return t;
}

inline std::vector<BlockId> random_ids(std::mt19937_64& rng, std::size_t n, std::size_t len)
{
  std::vector<BlockId> out(len);
  for (auto& id : out)
    id = static_cast<BlockId>(rng() % n);
  return out;
}

} // namespace oracle

#endif
