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

#include "icsize/cli.hpp"

#include "icsize/cache_sim.hpp"
#include "icsize/error.hpp"
#include "icsize/estimator.hpp"
#include "icsize/explorer.hpp"
#include "icsize/workload.hpp"

#include <charconv>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace icsize::cli
{

IsaProfile resolve_isa(std::string_view preset)
{
  if (preset == "arm")
    return IsaProfile::arm();
  if (preset == "pisa")
    return IsaProfile::pisa();
  constexpr std::string_view custom = "custom:";
  if (preset.starts_with(custom)) {
    auto digits = preset.substr(custom.size());
    std::uint32_t width = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), width);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty())
      return IsaProfile::make(std::string(preset), width);
  }
  throw InputError("unknown ISA '" + std::string(preset) + "' (expected arm, pisa or custom:<bytes>)");
}

namespace
{

struct EstimateArgs
{
  std::string program;
  std::string dynamic;
  std::string criterion = "dominant";
  std::string isa = "arm";
  bool literal_average = false;
  bool strict = false;
};

struct TimingArgs
{
  double base_cpi = 1.0;
  std::uint64_t miss_penalty = 10;
};

struct SimulateArgs
{
  std::string program;
  std::string trace;
  std::string isa = "arm";
  std::uint64_t line_size = 0;
  std::uint64_t num_lines = 0;
  TimingArgs timing;
  bool strict = false;
};

struct SweepArgs
{
  std::string program;
  std::string trace;
  std::string isa = "arm";
  std::vector<std::uint64_t> line_sizes;
  std::vector<std::uint64_t> num_lines;
  TimingArgs timing;
  std::string out_csv;
  std::string report_json;
  bool serial = false;
  bool strict = false;
};

struct GenArgs
{
  WorkloadSpec spec;
  std::string shape = "loopnest";
  std::string out_prefix;
};

void add_timing(CLI::App* cmd, TimingArgs& t)
{
  cmd->add_option("--base-cpi", t.base_cpi, "Cycles per instruction without misses")->capture_default_str();
  cmd->add_option("--miss-penalty", t.miss_penalty, "Cycles added per instruction-cache miss")
      ->capture_default_str();
}

TraceCheck check_of(bool strict) { return strict ? TraceCheck::Strict : TraceCheck::Lenient; }

void print_metrics(std::ostream& out, const ControlFlowGraph& cfg, const BlockLengthMetrics& m)
{
  out << fmt::format("blocks={}\n", cfg.size());
  out << fmt::format("average={} dominant={} dominant_block={} largest={} largest_block={}\n",
                     format_real(m.average), m.dominant, m.dominant_block_id, m.largest, m.largest_block_id);
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out)
{
  auto cfg = parse_program(read_file(a.program));
  auto profile = load_frequencies(read_file(a.dynamic), cfg, check_of(a.strict));
  auto isa = resolve_isa(a.isa);
  auto mode = a.literal_average ? AverageMode::Literal : AverageMode::Weighted;

  std::vector<Criterion> criteria;
  if (a.criterion == "all") {
    criteria.assign(all_criteria.begin(), all_criteria.end());
  } else if (auto c = parse_criterion(a.criterion)) {
    criteria.push_back(*c);
  } else {
    throw InputError("unknown criterion '" + a.criterion + "' (expected average, dominant, largest or all)");
  }

  print_metrics(out, cfg, compute_metrics(cfg, profile, mode));
  out << fmt::format("isa={} width={}\n", isa.name, isa.instruction_width_bytes);
  for (auto c : criteria) {
    auto est = estimate_config(cfg, profile, c, isa, mode);
    out << fmt::format("criterion={} line_size={} num_lines={} total_kb={}\n", to_string(c),
                       est.config.line_size_bytes(), est.config.num_lines(), est.config.total_kb());
  }
  return exit_ok;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out)
{
  auto cfg = parse_program(read_file(a.program));
  auto trace = parse_trace(read_file(a.trace));
  validate_trace(trace, cfg, check_of(a.strict));
  auto isa = resolve_isa(a.isa);
  CacheConfig config(a.line_size, a.num_lines);
  auto timing = TimingModel::make(a.timing.base_cpi, a.timing.miss_penalty);

  auto counts = simulate_trace(trace, cfg, isa, config);
  auto r = compute_ipc(counts.accesses, counts.misses, timing);
  out << fmt::format("line_size={} num_lines={} total_bytes={}\n", config.line_size_bytes(), config.num_lines(),
                     config.total_bytes());
  out << fmt::format("accesses={} misses={} miss_rate={} cycles={} ipc={}\n", r.accesses, r.misses,
                     format_real(r.miss_rate), format_real(r.cycles), format_real(r.ipc));
  return exit_ok;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out)
{
  auto cfg = parse_program(read_file(a.program));
  auto trace = parse_trace(read_file(a.trace));
  auto profile = frequencies_from_trace(trace, cfg, check_of(a.strict));
  auto isa = resolve_isa(a.isa);
  auto timing = TimingModel::make(a.timing.base_cpi, a.timing.miss_penalty);

  auto line_sizes = a.line_sizes.empty() ? default_line_sizes() : a.line_sizes;
  auto num_lines = a.num_lines.empty() ? default_num_lines() : a.num_lines;

  std::map<Criterion, CacheConfig> estimates;
  for (auto c : all_criteria)
    estimates.emplace(c, estimate_config(cfg, profile, c, isa).config);

  auto grid = sweep(cfg, trace, isa, line_sizes, num_lines, timing,
                    a.serial ? Execution::Serial : Execution::Parallel);
  if (!a.out_csv.empty()) {
    auto bytes = write_sweep_csv(grid, a.out_csv);
    out << fmt::format("wrote {} rows ({} bytes) to {}\n", grid.entries.size(), bytes, a.out_csv);
  }

  auto report = accuracy(grid, estimates);
  out << to_text(report);

  const auto& dom = estimates.at(Criterion::Dominant);
  std::size_t same_size = 0;
  for (const auto& e : grid.entries)
    same_size += e.config.total_bytes() == dom.total_bytes();
  if (same_size >= 2) {
    auto v = equal_size_variation(grid, dom.total_bytes());
    out << fmt::format("equal_size total_bytes={} best={}x{} worst={}x{} variation_percent={}\n", dom.total_bytes(),
                       v.best.config.line_size_bytes(), v.best.config.num_lines(), v.worst.config.line_size_bytes(),
                       v.worst.config.num_lines(), format_real(v.variation_percent));
  }

  if (!a.report_json.empty())
    write_file(a.report_json, to_json(report).dump(2) + "\n");
  return exit_ok;
}

int cmd_gen(GenArgs a, std::ostream& out)
{
  auto shape = parse_shape(a.shape);
  if (!shape)
    throw InputError("unknown shape '" + a.shape + "' (expected loopnest or hotcold)");
  a.spec.shape = *shape;
  auto w = generate(a.spec);
  const std::string prog = a.out_prefix + ".prog";
  const std::string trace = a.out_prefix + ".trace";
  write_file(prog, serialize_program(w.cfg));
  write_file(trace, serialize_trace(w.trace));
  out << fmt::format("wrote {} ({} blocks) and {} ({} visits)\n", prog, w.cfg.size(), trace, w.trace.seq.size());
  return exit_ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Instruction-cache sizing from basic-block profiles", "icsize"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate line size and line count from a profile");
  estimate->add_option("program", est.program, "Program file")->required();
  estimate->add_option("dynamic", est.dynamic, "Trace, edge-profile or profile file")->required();
  estimate->add_option("--criterion", est.criterion, "average, dominant, largest or all")->capture_default_str();
  estimate->add_option("--isa", est.isa, "arm, pisa or custom:<bytes>")->capture_default_str();
  estimate->add_flag("--literal-average", est.literal_average, "Divide the weighted sum by the block count");
  estimate->add_flag("--strict", est.strict, "Require the trace to follow CFG edges from entry");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate one direct-mapped configuration");
  simulate->add_option("program", sim.program, "Program file")->required();
  simulate->add_option("trace", sim.trace, "Trace file")->required();
  simulate->add_option("--line-size", sim.line_size, "Line size in bytes")->required();
  simulate->add_option("--num-lines", sim.num_lines, "Number of lines")->required();
  simulate->add_option("--isa", sim.isa, "arm, pisa or custom:<bytes>")->capture_default_str();
  simulate->add_flag("--strict", sim.strict, "Require the trace to follow CFG edges from entry");
  add_timing(simulate, sim.timing);

  SweepArgs sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "Simulate the line-size x line-count grid and score estimates");
  sweep_cmd->add_option("program", sw.program, "Program file")->required();
  sweep_cmd->add_option("trace", sw.trace, "Trace file")->required();
  sweep_cmd->add_option("--isa", sw.isa, "arm, pisa or custom:<bytes>")->capture_default_str();
  sweep_cmd->add_option("--line-sizes", sw.line_sizes, "Comma-separated line sizes (default 8..1024)")
      ->delimiter(',');
  sweep_cmd->add_option("--num-lines", sw.num_lines, "Comma-separated line counts (default 8..1024)")
      ->delimiter(',');
  sweep_cmd->add_option("--out", sw.out_csv, "Write the sweep CSV here");
  sweep_cmd->add_option("--report", sw.report_json, "Write the accuracy report JSON here");
  sweep_cmd->add_flag("--serial", sw.serial, "Simulate configurations on one thread");
  sweep_cmd->add_flag("--strict", sw.strict, "Require the trace to follow CFG edges from entry");
  add_timing(sweep_cmd, sw.timing);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic program and trace");
  gen_cmd->add_option("--seed", gen.spec.seed, "PRNG seed")->capture_default_str();
  gen_cmd->add_option("--shape", gen.shape, "loopnest or hotcold")->capture_default_str();
  gen_cmd->add_option("--blocks", gen.spec.num_blocks, "Number of basic blocks")->capture_default_str();
  gen_cmd->add_option("--trace-len", gen.spec.trace_len, "Number of block visits")->capture_default_str();
  gen_cmd->add_option("--min-len", gen.spec.min_len, "Shortest block length")->capture_default_str();
  gen_cmd->add_option("--max-len", gen.spec.max_len, "Longest block length")->capture_default_str();
  gen_cmd->add_option("--hot-fraction", gen.spec.hot_fraction, "Hot share of visits or blocks")
      ->capture_default_str();
  gen_cmd->add_option("--out-prefix", gen.out_prefix, "Writes <prefix>.prog and <prefix>.trace")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args)
    argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (estimate->parsed())
      return cmd_estimate(est, out);
    if (simulate->parsed())
      return cmd_simulate(sim, out);
    if (sweep_cmd->parsed())
      return cmd_sweep(sw, out);
    return cmd_gen(gen, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
}

} // namespace icsize::cli
