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

#ifndef ICSIZE_PROGRAM_HPP
#define ICSIZE_PROGRAM_HPP

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace icsize
{

using BlockId = std::uint32_t;
using Count = std::uint64_t;
using Edge = std::pair<BlockId, BlockId>;

struct BasicBlock
{
  BlockId id = 0;
  std::uint32_t length = 1; // IR instructions

  friend bool operator==(const BasicBlock&, const BasicBlock&) = default;
};

/// Static program structure. Block ids are dense (0..n-1) and blocks are
/// stored in id order. Immutable once constructed.
class ControlFlowGraph
{
public:
  /// Validates and builds. Throws InputError if ids are not exactly
  /// {0..n-1}, a length is zero, an edge endpoint or the entry is unknown.
  /// Blocks may be given in any order; they are stored sorted by id.
  ControlFlowGraph(std::vector<BasicBlock> blocks, std::set<Edge> edges, BlockId entry);

  std::span<const BasicBlock> blocks() const noexcept { return blocks_; }
  const std::set<Edge>& edges() const noexcept { return edges_; }
  BlockId entry() const noexcept { return entry_; }
  std::size_t size() const noexcept { return blocks_.size(); }

  const BasicBlock& block(BlockId id) const;
  bool contains(BlockId id) const noexcept { return id < blocks_.size(); }
  bool has_edge(BlockId src, BlockId dst) const { return edges_.contains({src, dst}); }

  friend bool operator==(const ControlFlowGraph&, const ControlFlowGraph&) = default;

private:
  std::vector<BasicBlock> blocks_;
  std::set<Edge> edges_;
  BlockId entry_;
};

/// Per-block execution counts, indexed by block id.
class ExecutionProfile
{
public:
  /// One entry per block of the owning graph; at least one entry must be
  /// positive.
  explicit ExecutionProfile(std::vector<Count> freq);

  Count operator[](BlockId id) const { return freq_.at(id); }
  std::span<const Count> counts() const noexcept { return freq_; }
  std::size_t size() const noexcept { return freq_.size(); }
  Count total() const noexcept;

  friend bool operator==(const ExecutionProfile&, const ExecutionProfile&) = default;

private:
  std::vector<Count> freq_;
};

/// Ordered record of executed blocks.
struct BlockTrace
{
  std::vector<BlockId> seq;
};

enum class TraceCheck
{
  Lenient, ///< ids must exist
  Strict   ///< also starts at entry and follows CFG edges
};

/// Throws InputError if the trace is empty or violates the requested check.
void validate_trace(const BlockTrace& trace, const ControlFlowGraph& cfg,
                    TraceCheck check = TraceCheck::Lenient);

struct IsaProfile
{
  std::string name;
  std::uint32_t instruction_width_bytes = 4;

  /// Throws InputError unless the width is one of 1, 2, 4, 8, 16.
  static IsaProfile make(std::string name, std::uint32_t width);
  static IsaProfile arm() { return make("arm", 4); }
  static IsaProfile pisa() { return make("pisa", 8); }
};

ExecutionProfile frequencies_from_trace(const BlockTrace& trace, const ControlFlowGraph& cfg,
                                        TraceCheck check = TraceCheck::Lenient);

using EdgeCounts = std::map<Edge, std::int64_t>;

/// Block frequency is the sum of incoming edge counts, plus entry_count on
/// the entry block.
ExecutionProfile frequencies_from_edges(const EdgeCounts& edge_counts, const ControlFlowGraph& cfg,
                                        Count entry_count);

// Text formats.

ControlFlowGraph parse_program(std::string_view text);
BlockTrace parse_trace(std::string_view text);

struct EdgeProfile
{
  Count entry_count = 0;
  EdgeCounts counts;
};
EdgeProfile parse_edge_profile(std::string_view text);

/// `freq <id> <count>` lines; every block of `cfg` must appear exactly once.
ExecutionProfile parse_profile(std::string_view text, const ControlFlowGraph& cfg);

std::string serialize_program(const ControlFlowGraph& cfg);
std::string serialize_trace(const BlockTrace& trace);
std::string serialize_edge_profile(const EdgeProfile& profile);
std::string serialize_profile(const ExecutionProfile& profile);

enum class DynamicFileKind
{
  Trace,
  EdgeProfile,
  Profile
};

/// Sniffs the first directive: `freq` means a profile, `entrycount` or
/// `edgecount` an edge profile, anything else a trace.
DynamicFileKind detect_dynamic_file(std::string_view text);

/// Reads any of the three dynamic formats into block frequencies.
ExecutionProfile load_frequencies(std::string_view text, const ControlFlowGraph& cfg,
                                  TraceCheck check = TraceCheck::Lenient);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace icsize

#endif
