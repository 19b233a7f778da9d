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
#include "icsize/error.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

using namespace icsize;
namespace fs = std::filesystem;

namespace
{

struct Run
{
  int code;
  std::string out;
  std::string err;
};

Run icsize_run(std::vector<std::string> args)
{
  args.insert(args.begin(), "icsize");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
  auto dir = fs::temp_directory_path() / "icsize_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t lines_in(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

const std::string ab_prog = oracle::data_path("ab.prog");
const std::string ab_trace = oracle::data_path("ab.trace");

} // namespace

TEST_CASE("estimate prints the qsort-like configuration")
{
  auto r = icsize_run({"estimate", oracle::data_path("qsort.prog"), oracle::data_path("qsort.profile"),
                       "--criterion", "dominant", "--isa", "arm"});
  CHECK(r.code == 0);
  CHECK(r.out.find("line_size=64 num_lines=128 total_kb=8\n") != std::string::npos);
  CHECK(r.out.find("dominant=15") != std::string::npos);
  CHECK(r.out.find("largest=19") != std::string::npos);
  CHECK(r.out.find("average=8.000000") != std::string::npos);
}

TEST_CASE("estimate error paths and presets")
{
  CHECK(icsize_run({"estimate", "/no/such/file.prog", ab_trace}).code == cli::exit_input);
  CHECK(icsize_run({"estimate", ab_prog, ab_trace, "--criterion", "median"}).code == cli::exit_input);
  CHECK(icsize_run({"estimate", ab_prog, ab_trace, "--isa", "custom:3"}).code == cli::exit_input);
  CHECK(icsize_run({"estimate", ab_prog, ab_trace, "--isa", "x86"}).code == cli::exit_input);
  CHECK(icsize_run({"estimate", ab_prog}).code == cli::exit_input);
  CHECK(icsize_run({}).code == cli::exit_input);
  CHECK(icsize_run({"--help"}).code == cli::exit_ok);

  auto sha = oracle::data_path("sha.prog");
  auto sha_profile = oracle::data_path("sha.profile");
  auto pisa = icsize_run({"estimate", sha, sha_profile, "--criterion", "all", "--isa", "pisa"});
  auto custom = icsize_run({"estimate", sha, sha_profile, "--criterion", "all", "--isa", "custom:8"});
  CHECK(pisa.code == 0);
  CHECK(pisa.out.find("criterion=dominant line_size=128 num_lines=64 total_kb=8\n") != std::string::npos);
  auto strip_isa = [](std::string s) { return s.substr(s.find("criterion=")); };
  CHECK(strip_isa(pisa.out) == strip_isa(custom.out));
}

TEST_CASE("estimate accepts traces and edge profiles")
{
  auto t = icsize_run({"estimate", ab_prog, ab_trace, "--strict"});
  CHECK(t.code == 0);
  CHECK(t.out.find("line_size=8 num_lines=2") != std::string::npos);

  auto edges = scratch("ab.edges");
  write_file(edges.string(), "entrycount 1\nedgecount 0 1 2\nedgecount 1 0 1\n");
  auto e = icsize_run({"estimate", ab_prog, edges.string()});
  CHECK(e.code == 0);
  CHECK(e.out.find("criterion=dominant line_size=8 num_lines=2") != std::string::npos);

  auto literal = icsize_run({"estimate", ab_prog, ab_trace, "--literal-average"});
  CHECK(literal.out.find("average=4.000000") != std::string::npos);
}

TEST_CASE("simulate")
{
  auto r = icsize_run({"simulate", ab_prog, ab_trace, "--line-size", "8", "--num-lines", "2"});
  CHECK(r.code == 0);
  // 1 / (1 + 2 * 10 / 8)
  CHECK(r.out.find("accesses=8 misses=2 miss_rate=0.250000 cycles=28.000000 ipc=0.285714\n") != std::string::npos);

  auto free = icsize_run({"simulate", ab_prog, ab_trace, "--line-size", "8", "--num-lines", "1", "--miss-penalty", "0"});
  CHECK(free.out.find("ipc=1.000000") != std::string::npos);

  auto bad = icsize_run({"simulate", ab_prog, ab_trace, "--line-size", "8", "--num-lines", "3"});
  CHECK(bad.code == cli::exit_input);
  CHECK(bad.err.find("not a power of two") != std::string::npos);

  CHECK(icsize_run({"simulate", ab_prog, ab_trace, "--line-size", "8", "--num-lines", "2", "--base-cpi", "0"}).code ==
        cli::exit_input);
}

TEST_CASE("sweep writes CSV and accuracy report")
{
  auto csv = scratch("ab_small.csv");
  auto json = scratch("ab_small.json");
  auto r = icsize_run({"sweep", ab_prog, ab_trace, "--line-sizes", "8", "--num-lines", "1,2", "--out", csv.string(),
                       "--report", json.string()});
  CHECK(r.code == 0);
  auto text = read_file(csv.string());
  CHECK(lines_in(text) == 3);
  CHECK(r.out.find("dominant line_size=8 num_lines=2") != std::string::npos);

  auto report = nlohmann::json::parse(read_file(json.string()));
  CHECK(report["criteria"].size() == 3);
  for (const auto& c : report["criteria"])
    CHECK(c["accuracy_percent"] == 100.0);
}

TEST_CASE("sweep on default ranges")
{
  // two blocks need 2 lines, outside the default 8..1024 line counts: the
  // grid is still written but scoring fails
  auto csv = scratch("ab_default.csv");
  auto r = icsize_run({"sweep", ab_prog, ab_trace, "--out", csv.string()});
  CHECK(r.code == cli::exit_input);
  CHECK(r.err.find("estimate not in sweep grid") != std::string::npos);
  CHECK(lines_in(read_file(csv.string())) == 65);

  auto prefix = scratch("sweep_default").string();
  REQUIRE(icsize_run({"gen", "--seed", "3", "--blocks", "40", "--trace-len", "4000", "--out-prefix", prefix}).code ==
          0);
  auto ok = icsize_run({"sweep", prefix + ".prog", prefix + ".trace", "--isa", "pisa", "--out", csv.string()});
  CHECK(ok.code == 0);
  CHECK(lines_in(read_file(csv.string())) == 65);
  for (const char* c : {"average line_size=", "dominant line_size=", "largest line_size="})
    CHECK(ok.out.find(c) != std::string::npos);
  CHECK(ok.out.find("accuracy_percent=") != std::string::npos);
}

TEST_CASE("gen")
{
  auto a = scratch("gen_a").string();
  auto b = scratch("gen_b").string();
  for (const auto& p : {a, b})
    REQUIRE(icsize_run({"gen", "--seed", "5", "--shape", "hotcold", "--blocks", "30", "--trace-len", "500",
                        "--out-prefix", p})
                .code == 0);
  CHECK(read_file(a + ".prog") == read_file(b + ".prog"));
  CHECK(read_file(a + ".trace") == read_file(b + ".trace"));

  CHECK(icsize_run({"gen", "--blocks", "1", "--shape", "loopnest", "--out-prefix", a}).code == cli::exit_input);
  CHECK(icsize_run({"gen", "--shape", "spiral", "--out-prefix", a}).code == cli::exit_input);

  auto est = icsize_run({"estimate", a + ".prog", a + ".trace", "--strict", "--criterion", "all"});
  CHECK(est.code == 0);
  CHECK(est.err.empty());
}

TEST_CASE("isa presets")
{
  CHECK(cli::resolve_isa("arm").instruction_width_bytes == 4);
  CHECK(cli::resolve_isa("pisa").instruction_width_bytes == 8);
  CHECK(cli::resolve_isa("custom:16").instruction_width_bytes == 16);
  CHECK_THROWS_AS(cli::resolve_isa("custom:"), InputError);
  CHECK_THROWS_AS(cli::resolve_isa("custom:12"), InputError);
}
