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

#include "sconv/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

#include "sconv/oracle.hpp"

namespace sconv {

namespace {

using Clock = std::chrono::steady_clock;

Index get_index(const nlohmann::json& record, const char* key, Index fallback) {
  const auto it = record.find(key);
  if (it == record.end()) return fallback;
  if (!it->is_number_integer()) throw Error(std::string("field '") + key + "' must be an integer");
  return it->get<Index>();
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

void verify_case(const ConvCase& c, std::size_t index, const ArchInfo& arch, const MkInfo& mk,
                 const RunOptions& options, CaseReport& report) {
  report.id = c.id;
  try {
    const auto plan = make_plan(c.params, arch, mk);
    report.schedule = plan.strategy.schedule;
    report.nc = plan.strategy.nc;
    report.k2 = plan.strategy.k2;
    report.k3 = plan.strategy.k3;
    report.regions = plan.regions;

    const auto tensors = make_case_tensors(c.params, options.seed, index);
    const ExecContext ctx{options.microkernel, nullptr};
    const auto t0 = Clock::now();
    const auto got = run_plan(plan, tensors.input, tensors.filters, c.params, mk, ctx);
    const auto t1 = Clock::now();
    const auto want = oracle::naive_conv(tensors.input, tensors.filters, c.params);

    report.max_rel_err = oracle::max_rel_error(got, want);
    report.correct = report.max_rel_err <= options.tolerance;
    report.seconds = std::chrono::duration<double>(t1 - t0).count();
  } catch (const std::exception& e) {
    report.correct = false;
    report.max_rel_err = std::numeric_limits<double>::infinity();
    report.error = e.what();
  }
}

void time_case(const ConvCase& c, std::size_t index, const ArchInfo& arch, const MkInfo& mk,
               const RunOptions& options, CaseReport& report) {
  const auto plan = make_plan(c.params, arch, mk);
  const auto tensors = make_case_tensors(c.params, options.seed, index);
  const ExecContext ctx{options.microkernel, nullptr};
  const Index iterations = std::max<Index>(1, c.repeat);
  double total = 0.0;
  for (Index i = 0; i < iterations; ++i) {
    const auto t0 = Clock::now();
    const auto out = run_plan(plan, tensors.input, tensors.filters, c.params, mk, ctx);
    const auto t1 = Clock::now();
    if (i > 0 || iterations == 1) total += std::chrono::duration<double>(t1 - t0).count();
  }
  report.seconds = total / static_cast<double>(iterations > 1 ? iterations - 1 : 1);
}

}  // namespace

ConvCase parse_case(const nlohmann::json& record, const std::string& fallback_id) {
  if (!record.is_object()) throw Error("record is not a JSON object");
  ConvCase c;
  c.id = fallback_id;
  if (const auto it = record.find("id"); it != record.end()) {
    c.id = it->is_string() ? it->get<std::string>() : it->dump();
  }
  if (get_index(record, "groups", 1) != 1) {
    throw Error("grouped convolution is not supported");
  }
  auto& p = c.params;
  p.n = get_index(record, "n", 1);
  for (const char* key : {"ic", "ih", "iw", "oc"}) {
    if (!record.contains(key)) throw Error(std::string("missing field '") + key + "'");
  }
  p.ic = get_index(record, "ic", 0);
  p.ih = get_index(record, "ih", 0);
  p.iw = get_index(record, "iw", 0);
  p.oc = get_index(record, "oc", 0);
  p.fh = get_index(record, "fh", 1);
  p.fw = get_index(record, "fw", 1);
  const Index stride = get_index(record, "stride", 1);
  const Index dil = get_index(record, "dil", 1);
  const Index pad = get_index(record, "pad", 0);
  p.stride_h = get_index(record, "stride_h", stride);
  p.stride_w = get_index(record, "stride_w", stride);
  p.dil_h = get_index(record, "dil_h", dil);
  p.dil_w = get_index(record, "dil_w", dil);
  p.pad_h = get_index(record, "pad_h", pad);
  p.pad_w = get_index(record, "pad_w", pad);
  c.repeat = get_index(record, "repeat", 30);
  if (c.repeat < 1) throw Error("repeat must be >= 1");
  out_shape(p);  // validates
  return c;
}

Suite parse_suite(std::istream& in) {
  Suite suite;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string fallback = "line" + std::to_string(line_no);
    std::string id = fallback;
    try {
      const auto record = nlohmann::json::parse(line);
      if (record.is_object() && record.contains("id") && record["id"].is_string()) {
        id = record["id"].get<std::string>();
      }
      suite.cases.push_back(parse_case(record, fallback));
    } catch (const std::exception& e) {
      suite.errors.push_back(SuiteError{line_no, id, e.what()});
    }
  }
  return suite;
}

Suite load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open suite file " + path.string());
  return parse_suite(in);
}

void fill_uniform(Tensor4D& t, std::mt19937_64& gen) {
  for (float& v : t.data()) {
    v = static_cast<float>(gen() >> 40) * 0x1p-23f - 1.0f;
  }
}

CaseTensors make_case_tensors(const ConvParams& p, std::uint64_t seed, std::size_t case_index) {
  std::mt19937_64 gen(seed + case_index);
  CaseTensors t{Tensor4D(p.input_dims()), Tensor4D(p.filter_dims())};
  fill_uniform(t.input, gen);
  fill_uniform(t.filters, gen);
  return t;
}

std::vector<CaseReport> run_suite(const std::vector<ConvCase>& cases, const ArchInfo& arch,
                                  const MkInfo& mk, const RunOptions& options) {
  std::vector<CaseReport> reports(cases.size());

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, options.jobs)), cases.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cases.size(); ++i) {
      verify_case(cases[i], i, arch, mk, options, reports[i]);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) {
          verify_case(cases[i], i, arch, mk, options, reports[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  // Timing runs are serial so cases do not disturb each other.
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto& r = reports[i];
    if (!r.error.empty()) continue;
    if (!options.verify_only) time_case(cases[i], i, arch, mk, options, r);
    const double secs = std::max(r.seconds, 1e-9);
    r.gflops = static_cast<double>(flops(make_conv_info(cases[i].params))) / secs * 1e-9;
  }
  return reports;
}

void write_csv(std::ostream& os, const std::vector<CaseReport>& reports) {
  os << "id,correct,max_rel_err,gflops,schedule,nc,k2,k3,regions,seconds\n";
  for (const auto& r : reports) {
    os << r.id << ',' << (r.correct ? "true" : "false") << ','
       << format_double("%.6e", r.max_rel_err) << ',' << format_double("%.4f", r.gflops) << ','
       << (r.error.empty() ? to_string(r.schedule) : "-") << ',' << r.nc << ',' << r.k2 << ','
       << r.k3 << ',' << r.regions.size() << ',' << format_double("%.6f", r.seconds) << '\n';
  }
}

nlohmann::json report_regions_json(const CaseReport& report) {
  return {{"id", report.id},
          {"schedule", to_string(report.schedule)},
          {"nc", report.nc},
          {"k2", report.k2},
          {"k3", report.k3},
          {"regions", regions_to_json(report.regions)}};
}

}  // namespace sconv
