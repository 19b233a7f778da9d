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

#include "icsize/program.hpp"

#include "icsize/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

namespace icsize
{

namespace
{

// Splits one line into whitespace-separated tokens, dropping `#` comments.
std::vector<std::string_view> tokenize(std::string_view line)
{
  if (auto hash = line.find('#'); hash != std::string_view::npos)
    line = line.substr(0, hash);

  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
      ++pos;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end])))
      ++end;
    if (end > pos)
      tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

// Calls fn(line_number, tokens) for every non-blank line.
template <typename Fn>
void for_each_directive(std::string_view text, Fn&& fn)
{
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (auto tokens = tokenize(line); !tokens.empty())
      fn(line_no, tokens);
    if (nl == std::string_view::npos)
      break;
    pos = nl + 1;
  }
}

template <typename Int>
Int parse_int(std::string_view token, std::size_t line_no, const char* what)
{
  Int value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(line_no, std::string("invalid ") + what + " '" + std::string(token) + "'");
  return value;
}

void expect_arity(const std::vector<std::string_view>& tokens, std::size_t n, std::size_t line_no)
{
  if (tokens.size() != n)
    throw ParseError(line_no, "'" + std::string(tokens.front()) + "' expects " + std::to_string(n - 1) +
                                  " argument(s), got " + std::to_string(tokens.size() - 1));
}

} // namespace

ControlFlowGraph::ControlFlowGraph(std::vector<BasicBlock> blocks, std::set<Edge> edges, BlockId entry)
    : blocks_(std::move(blocks)), edges_(std::move(edges)), entry_(entry)
{
  if (blocks_.empty())
    throw InputError("program has no blocks");
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i > 0 && blocks_[i].id == blocks_[i - 1].id)
      throw InputError("duplicate block id " + std::to_string(blocks_[i].id));
    if (blocks_[i].id != i)
      throw InputError("block ids are not dense: expected " + std::to_string(i) + ", found " +
                       std::to_string(blocks_[i].id));
    if (blocks_[i].length == 0)
      throw InputError("block " + std::to_string(i) + " has zero length");
  }
  for (auto [src, dst] : edges_) {
    if (!contains(src) || !contains(dst))
      throw InputError("edge to unknown id: " + std::to_string(src) + " -> " + std::to_string(dst));
  }
  if (!contains(entry_))
    throw InputError("entry references unknown block " + std::to_string(entry_));
}

const BasicBlock& ControlFlowGraph::block(BlockId id) const
{
  if (!contains(id))
    throw InputError("unknown block id " + std::to_string(id));
  return blocks_[id];
}

ExecutionProfile::ExecutionProfile(std::vector<Count> freq) : freq_(std::move(freq))
{
  if (std::all_of(freq_.begin(), freq_.end(), [](Count c) { return c == 0; }))
    throw InputError("execution profile has no positive frequency");
}

Count ExecutionProfile::total() const noexcept
{
  return std::accumulate(freq_.begin(), freq_.end(), Count{0});
}

void validate_trace(const BlockTrace& trace, const ControlFlowGraph& cfg, TraceCheck check)
{
  if (trace.seq.empty())
    throw InputError("trace is empty");
  for (std::size_t k = 0; k < trace.seq.size(); ++k) {
    if (!cfg.contains(trace.seq[k]))
      throw InputError("trace position " + std::to_string(k) + ": unknown block id " +
                       std::to_string(trace.seq[k]));
  }
  if (check == TraceCheck::Lenient)
    return;
  if (trace.seq.front() != cfg.entry())
    throw InputError("strict trace must start at entry block " + std::to_string(cfg.entry()));
  for (std::size_t k = 0; k + 1 < trace.seq.size(); ++k) {
    if (!cfg.has_edge(trace.seq[k], trace.seq[k + 1]))
      throw InputError("trace position " + std::to_string(k) + ": no edge " +
                       std::to_string(trace.seq[k]) + " -> " + std::to_string(trace.seq[k + 1]));
  }
}

IsaProfile IsaProfile::make(std::string name, std::uint32_t width)
{
  switch (width) {
  case 1:
  case 2:
  case 4:
  case 8:
  case 16:
    return IsaProfile{std::move(name), width};
  default:
    throw InputError("invalid instruction width " + std::to_string(width) +
                     " (expected 1, 2, 4, 8 or 16)");
  }
}

ExecutionProfile frequencies_from_trace(const BlockTrace& trace, const ControlFlowGraph& cfg, TraceCheck check)
{
  validate_trace(trace, cfg, check);
  std::vector<Count> freq(cfg.size(), 0);
  for (auto id : trace.seq)
    ++freq[id];
  return ExecutionProfile(std::move(freq));
}

ExecutionProfile frequencies_from_edges(const EdgeCounts& edge_counts, const ControlFlowGraph& cfg,
                                        Count entry_count)
{
  std::vector<Count> freq(cfg.size(), 0);
  for (const auto& [edge, count] : edge_counts) {
    if (!cfg.has_edge(edge.first, edge.second))
      throw InputError("count on unknown edge " + std::to_string(edge.first) + " -> " +
                       std::to_string(edge.second));
    if (count < 0)
      throw InputError("negative count on edge " + std::to_string(edge.first) + " -> " +
                       std::to_string(edge.second));
    freq[edge.second] += static_cast<Count>(count);
  }
  freq[cfg.entry()] += entry_count;
  return ExecutionProfile(std::move(freq));
}

ControlFlowGraph parse_program(std::string_view text)
{
  std::vector<BasicBlock> blocks;
  std::map<BlockId, std::size_t> block_lines;
  std::vector<std::pair<Edge, std::size_t>> edges;
  std::optional<BlockId> entry;
  std::size_t entry_line = 0;

  for_each_directive(text, [&](std::size_t line_no, const std::vector<std::string_view>& tok) {
    if (tok[0] == "block") {
      expect_arity(tok, 3, line_no);
      auto id = parse_int<BlockId>(tok[1], line_no, "block id");
      auto len = parse_int<std::uint32_t>(tok[2], line_no, "block length");
      if (len == 0)
        throw ParseError(line_no, "block " + std::to_string(id) + " has zero length");
      if (!block_lines.emplace(id, line_no).second)
        throw ParseError(line_no, "duplicate block id " + std::to_string(id));
      blocks.push_back({id, len});
    } else if (tok[0] == "edge") {
      expect_arity(tok, 3, line_no);
      Edge e{parse_int<BlockId>(tok[1], line_no, "edge source"),
             parse_int<BlockId>(tok[2], line_no, "edge target")};
      edges.emplace_back(e, line_no);
    } else if (tok[0] == "entry") {
      expect_arity(tok, 2, line_no);
      if (entry)
        throw ParseError(line_no, "duplicate entry declaration");
      entry = parse_int<BlockId>(tok[1], line_no, "entry id");
      entry_line = line_no;
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
    }
  });

  if (blocks.empty())
    throw InputError("program has no blocks");
  if (!entry)
    throw InputError("missing entry declaration");

  std::size_t expected = 0;
  for (const auto& [id, line_no] : block_lines) {
    if (id != expected)
      throw ParseError(line_no, "block ids are not dense: expected " + std::to_string(expected) +
                                    ", found " + std::to_string(id));
    ++expected;
  }

  std::set<Edge> edge_set;
  for (const auto& [e, line_no] : edges) {
    if (!block_lines.contains(e.first) || !block_lines.contains(e.second))
      throw ParseError(line_no, "edge to unknown id " + std::to_string(e.first) + " -> " +
                                    std::to_string(e.second));
    if (!edge_set.insert(e).second)
      throw ParseError(line_no, "duplicate edge " + std::to_string(e.first) + " -> " +
                                    std::to_string(e.second));
  }
  if (!block_lines.contains(*entry))
    throw ParseError(entry_line, "entry references unknown block " + std::to_string(*entry));

  return ControlFlowGraph(std::move(blocks), std::move(edge_set), *entry);
}

BlockTrace parse_trace(std::string_view text)
{
  BlockTrace trace;
  for_each_directive(text, [&](std::size_t line_no, const std::vector<std::string_view>& tok) {
    for (auto t : tok)
      trace.seq.push_back(parse_int<BlockId>(t, line_no, "block id"));
  });
  if (trace.seq.empty())
    throw InputError("trace is empty");
  return trace;
}

EdgeProfile parse_edge_profile(std::string_view text)
{
  EdgeProfile profile;
  bool seen_entry = false;
  for_each_directive(text, [&](std::size_t line_no, const std::vector<std::string_view>& tok) {
    if (tok[0] == "entrycount") {
      expect_arity(tok, 2, line_no);
      if (seen_entry)
        throw ParseError(line_no, "duplicate entrycount");
      profile.entry_count = parse_int<Count>(tok[1], line_no, "entry count");
      seen_entry = true;
    } else if (tok[0] == "edgecount") {
      expect_arity(tok, 4, line_no);
      Edge e{parse_int<BlockId>(tok[1], line_no, "edge source"),
             parse_int<BlockId>(tok[2], line_no, "edge target")};
      auto count = parse_int<std::int64_t>(tok[3], line_no, "edge count");
      if (!profile.counts.emplace(e, count).second)
        throw ParseError(line_no, "duplicate edgecount " + std::to_string(e.first) + " -> " +
                                      std::to_string(e.second));
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
    }
  });
  if (!seen_entry)
    throw InputError("missing entrycount declaration");
  return profile;
}

ExecutionProfile parse_profile(std::string_view text, const ControlFlowGraph& cfg)
{
  std::vector<std::optional<Count>> freq(cfg.size());
  for_each_directive(text, [&](std::size_t line_no, const std::vector<std::string_view>& tok) {
    if (tok[0] != "freq")
      throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
    expect_arity(tok, 3, line_no);
    auto id = parse_int<BlockId>(tok[1], line_no, "block id");
    if (!cfg.contains(id))
      throw ParseError(line_no, "unknown block id " + std::to_string(id));
    if (freq[id])
      throw ParseError(line_no, "duplicate freq for block " + std::to_string(id));
    freq[id] = parse_int<Count>(tok[2], line_no, "count");
  });
  std::vector<Count> out;
  out.reserve(freq.size());
  for (std::size_t id = 0; id < freq.size(); ++id) {
    if (!freq[id])
      throw InputError("profile has no entry for block " + std::to_string(id));
    out.push_back(*freq[id]);
  }
  return ExecutionProfile(std::move(out));
}

std::string serialize_program(const ControlFlowGraph& cfg)
{
  std::ostringstream os;
  for (const auto& b : cfg.blocks())
    os << "block " << b.id << ' ' << b.length << '\n';
  for (auto [src, dst] : cfg.edges())
    os << "edge " << src << ' ' << dst << '\n';
  os << "entry " << cfg.entry() << '\n';
  return os.str();
}

std::string serialize_trace(const BlockTrace& trace)
{
  std::string out;
  out.reserve(trace.seq.size() * 4);
  for (auto id : trace.seq) {
    out += std::to_string(id);
    out += '\n';
  }
  return out;
}

std::string serialize_edge_profile(const EdgeProfile& profile)
{
  std::ostringstream os;
  os << "entrycount " << profile.entry_count << '\n';
  for (const auto& [e, count] : profile.counts)
    os << "edgecount " << e.first << ' ' << e.second << ' ' << count << '\n';
  return os.str();
}

std::string serialize_profile(const ExecutionProfile& profile)
{
  std::ostringstream os;
  for (std::size_t id = 0; id < profile.size(); ++id)
    os << "freq " << id << ' ' << profile.counts()[id] << '\n';
  return os.str();
}

DynamicFileKind detect_dynamic_file(std::string_view text)
{
  std::optional<DynamicFileKind> kind;
  for_each_directive(text, [&](std::size_t, const std::vector<std::string_view>& tok) {
    if (kind)
      return;
    if (tok[0] == "freq")
      kind = DynamicFileKind::Profile;
    else if (tok[0] == "entrycount" || tok[0] == "edgecount")
      kind = DynamicFileKind::EdgeProfile;
    else
      kind = DynamicFileKind::Trace;
  });
  return kind.value_or(DynamicFileKind::Trace);
}

ExecutionProfile load_frequencies(std::string_view text, const ControlFlowGraph& cfg, TraceCheck check)
{
  switch (detect_dynamic_file(text)) {
  case DynamicFileKind::Profile:
    return parse_profile(text, cfg);
  case DynamicFileKind::EdgeProfile: {
    auto ep = parse_edge_profile(text);
    return frequencies_from_edges(ep.counts, cfg, ep.entry_count);
  }
  case DynamicFileKind::Trace:
    break;
  }
  return frequencies_from_trace(parse_trace(text), cfg, check);
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw InputError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out)
    throw InputError("write failed for '" + path + "'");
}

} // namespace icsize
