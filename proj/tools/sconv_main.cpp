/* Copyright 2026 The SConv Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line driver: runs convolution suites through the sliced engine,
// checks them against the naive oracle and reports throughput as CSV.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sconv/arch.hpp"
#include "sconv/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIncorrect = 1;
constexpr int kExitInput = 2;

struct RunArgs {
  std::string suite;
  std::string arch;
  std::optional<long long> n_win;
  std::optional<long long> n_f;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
  std::string dump_regions;
  bool verify_only = false;
};

int run(const RunArgs& args) {
  sconv::ArchFile arch_file;
  sconv::Suite suite;
  try {
    arch_file = sconv::load_arch_file(args.arch);
    suite = sconv::load_suite(args.suite);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  sconv::MkInfo mk;
  if (arch_file.n_win) mk.n_win = *arch_file.n_win;
  if (arch_file.n_f) mk.n_f = *arch_file.n_f;
  if (arch_file.vector_bits) mk.vector_bytes = *arch_file.vector_bits / 8;
  if (args.n_win) mk.n_win = *args.n_win;
  if (args.n_f) mk.n_f = *args.n_f;
  try {
    sconv::validate(mk);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  for (const auto& err : suite.errors) {
    std::cerr << "skipped record at line " << err.line << " (" << err.id << "): " << err.reason
              << '\n';
  }

  sconv::RunOptions options;
  options.seed = args.seed;
  options.jobs = args.jobs;
  options.verify_only = args.verify_only;
  const auto reports = sconv::run_suite(suite.cases, arch_file.arch, mk, options);

  if (args.out.empty()) {
    sconv::write_csv(std::cout, reports);
  } else {
    std::ofstream out(args.out);
    if (!out) {
      std::cerr << "error: cannot write " << args.out << '\n';
      return kExitInput;
    }
    sconv::write_csv(out, reports);
  }

  if (!args.dump_regions.empty()) {
    std::ofstream dump(args.dump_regions);
    for (const auto& r : reports) dump << sconv::report_regions_json(r).dump() << '\n';
  }

  bool all_correct = true;
  for (const auto& r : reports) {
    if (!r.error.empty()) std::cerr << "case " << r.id << " failed: " << r.error << '\n';
    all_correct = all_correct && r.correct;
  }
  if (!all_correct) return kExitIncorrect;
  return suite.errors.empty() ? kExitOk : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sliced direct convolution benchmark harness"};
  app.require_subcommand(1);

  RunArgs args;
  auto* run_cmd = app.add_subcommand("run", "Verify and time a convolution suite");
  run_cmd->add_option("--suite", args.suite, "JSON Lines suite file")->required();
  run_cmd->add_option("--arch", args.arch, "Arch description file")->required();
  run_cmd->add_option("--nwin", args.n_win, "Windows per microkernel call");
  run_cmd->add_option("--nf", args.n_f, "Filters per microkernel call");
  run_cmd->add_option("--seed", args.seed, "Seed for tensor initialisation");
  run_cmd->add_option("--jobs", args.jobs, "Parallel verification workers")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", args.out, "CSV report path (default: stdout)");
  run_cmd->add_option("--dump-regions", args.dump_regions,
                      "Write the strategy and region tree of every case as JSON Lines");
  run_cmd->add_flag("--verify-only", args.verify_only, "Skip the repeated timing runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (run_cmd->parsed()) return run(args);
  return kExitInput;
}
