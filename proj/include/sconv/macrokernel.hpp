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

#ifndef SCONV_MACROKERNEL_HPP_
#define SCONV_MACROKERNEL_HPP_

#include <functional>
#include <span>
#include <vector>

#include "sconv/arch.hpp"
#include "sconv/conv.hpp"
#include "sconv/csa.hpp"
#include "sconv/packing.hpp"
#include "sconv/region.hpp"

namespace sconv {

enum class LoopDim { Batch, Channel, WindowSet, FilterSet, WindowTile, FilterTile };

std::string_view to_string(LoopDim d);

struct LoopDesc {
  LoopDim dim;
  Index extent;
  Index step;
  friend bool operator==(const LoopDesc&, const LoopDesc&) = default;
};

// Loop nest for one Main region, outermost first. Set loops step over
// window_set * n_win windows or filter_set * n_f filters; tile loops walk a
// single set. The stationary tensor is packed one tile at a time at
// `pack_level`; the other tensor is multipacked `multipack_tiles` tiles at a
// time at `multipack_level`.
struct LoopNestPlan {
  Schedule schedule = Schedule::InputStationary;
  std::vector<LoopDesc> loops;
  Index nc = 1;
  Index window_set = 1;  // window tiles per window set
  Index filter_set = 1;  // filter tiles per filter set
  PackKind stationary = PackKind::Input;
  LoopDim pack_level = LoopDim::WindowTile;
  LoopDim multipack_level = LoopDim::FilterSet;
  Index multipack_tiles = 1;
};

// Set sizes are clamped to the region, so remainder regions get a single,
// smaller set.
LoopNestPlan build_plan(const KernelRegion& region, const CsaStrategy& strategy, const MkInfo& mk,
                        Index batch = 1);

// Packed input rows are in_stride apart, packed filter rows f_stride apart,
// and accumulator rows (one per filter) acc_stride apart.
struct MicrokernelArgs {
  const float* in = nullptr;
  const float* filt = nullptr;
  float* acc = nullptr;
  Index k = 0;
  Index n_win = 0;
  Index n_f = 0;
  Index in_stride = 0;
  Index f_stride = 0;
  Index acc_stride = 0;
};

using MicrokernelFn = std::function<void(const MicrokernelArgs&)>;

// acc[f][w] += sum_k filt[k][f] * in[k][w]. Never zeroes acc.
void microkernel(const MicrokernelArgs& args);

// Checked form over dense K x n_win / K x n_f / n_f x n_win buffers.
void microkernel(std::span<const float> packed_in, std::span<const float> packed_f,
                 std::span<float> acc, Index k, Index n_win, Index n_f);

struct ExecCounters {
  Index input_tiles_packed = 0;
  Index filter_tiles_packed = 0;
  Index input_pack_calls = 0;
  Index filter_pack_calls = 0;
  Index microkernel_calls = 0;
  Index acc_writebacks = 0;
  Index naive_regions = 0;

  ExecCounters& operator+=(const ExecCounters& o);
};

struct ExecContext {
  MicrokernelFn microkernel;  // empty: built-in kernel
  ExecCounters* counters = nullptr;
};

// Runs one region over a pre-padded input (conv has zero padding) and adds
// its contribution into `output`, which the caller zero-initialises. Output
// outside the region's windows and filters is left untouched. Remainder
// regions are routed to naive_fallback_region.
void execute_region(const Tensor4D& input, const Tensor4D& filters, Tensor4D& output,
                    const ConvInfo& conv, const KernelRegion& region, const CsaStrategy& strategy,
                    const MkInfo& mk, const ExecContext& ctx = {});

// Scalar direct convolution restricted to the region, accumulated in f64.
void naive_fallback_region(const Tensor4D& input, const Tensor4D& filters, Tensor4D& output,
                           const ConvInfo& conv, const KernelRegion& region);

struct SlicedPlan {
  ConvInfo conv;  // padded problem the engine runs
  CsaStrategy strategy;
  std::vector<KernelRegion> regions;
};

SlicedPlan make_plan(const ConvParams& params, const ArchInfo& arch, const MkInfo& mk);

// Pads the input, zero-initialises the output and executes every region.
Tensor4D run_plan(const SlicedPlan& plan, const Tensor4D& input, const Tensor4D& filters,
                  const ConvParams& params, const MkInfo& mk, const ExecContext& ctx = {});

Tensor4D sliced_conv(const Tensor4D& input, const Tensor4D& filters, const ConvParams& params,
                     const ArchInfo& arch, const MkInfo& mk, const ExecContext& ctx = {});

}  // namespace sconv

#endif  // SCONV_MACROKERNEL_HPP_
