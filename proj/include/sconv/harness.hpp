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

#ifndef SCONV_HARNESS_HPP_
#define SCONV_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "sconv/arch.hpp"
#include "sconv/conv.hpp"
#include "sconv/csa.hpp"
#include "sconv/macrokernel.hpp"
#include "sconv/region.hpp"

namespace sconv {

struct ConvCase {
  std::string id;
  ConvParams params;
  Index repeat = 30;
};

struct SuiteError {
  Index line = 0;
  std::string id;
  std::string reason;
};

struct Suite {
  std::vector<ConvCase> cases;
  std::vector<SuiteError> errors;
};

// One JSON object per line with keys n, ic, ih, iw, oc, fh, fw, stride_h,
// stride_w, dil_h, dil_w, pad_h, pad_w, plus optional id and repeat. The
// shorthands stride, dil and pad set both axes. Grouped convolutions
// ("groups" > 1) are rejected. Bad records land in Suite::errors.
Suite parse_suite(std::istream& in);
Suite load_suite(const std::filesystem::path& path);

// Throws Error with the rejection reason.
ConvCase parse_case(const nlohmann::json& record, const std::string& fallback_id);

// Fills the tensor with uniform values in [-1, 1): each element takes the top
// 24 bits of one mt19937_64 draw, scaled by 2^-23, minus one.
void fill_uniform(Tensor4D& t, std::mt19937_64& gen);

struct CaseTensors {
  Tensor4D input;
  Tensor4D filters;
};

// Inputs then filters drawn from mt19937_64 seeded with seed + case_index.
CaseTensors make_case_tensors(const ConvParams& p, std::uint64_t seed, std::size_t case_index);

struct CaseReport {
  std::string id;
  bool correct = false;
  double max_rel_err = 0.0;
  double gflops = 0.0;
  Schedule schedule = Schedule::InputStationary;
  Index nc = 0;
  Index k2 = 0;
  Index k3 = 0;
  std::vector<KernelRegion> regions;
  double seconds = 0.0;
  std::string error;  // set when the case could not run
};

struct RunOptions {
  std::uint64_t seed = 0;
  int jobs = 1;
  bool verify_only = false;
  double tolerance = 1e-4;
  MicrokernelFn microkernel;  // empty: built-in
};

// Verifies every case against the naive oracle (in parallel when jobs > 1),
// then times them serially unless verify_only. Timing drops the first
// iteration and averages the rest on a monotonic clock.
std::vector<CaseReport> run_suite(const std::vector<ConvCase>& cases, const ArchInfo& arch,
                                  const MkInfo& mk, const RunOptions& options);

// Columns: id,correct,max_rel_err,gflops,schedule,nc,k2,k3,regions,seconds.
void write_csv(std::ostream& os, const std::vector<CaseReport>& reports);

nlohmann::json report_regions_json(const CaseReport& report);

}  // namespace sconv

#endif  // SCONV_HARNESS_HPP_
