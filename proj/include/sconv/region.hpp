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

#ifndef SCONV_REGION_HPP_
#define SCONV_REGION_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sconv/arch.hpp"
#include "sconv/conv.hpp"
#include "sconv/csa.hpp"

namespace sconv {

// Main regions are aligned to whole n_f x n_win tiles and run the tiled,
// packed pipeline. Remainder regions are too small for one microkernel tile
// and run the naive fallback.
enum class RegionKind { Main, Remainder };

// Which split produced a region.
enum class RegionOrigin { Body, SpatialTail, FilterTail, K2Remainder, K3Remainder, NcRemainder };

std::string_view to_string(RegionKind k);
std::string_view to_string(RegionOrigin o);

// Box in the (window x filter x channel) iteration space. Windows index the
// flattened oh*ow output plane.
struct KernelRegion {
  Index spatial_start = 0;
  Index spatial_len = 0;
  Index oc_start = 0;
  Index oc_len = 0;
  Index ic_start = 0;
  Index ic_len = 0;
  RegionKind kind = RegionKind::Main;
  RegionOrigin origin = RegionOrigin::Body;
  Index e_off = 0;  // spatial offset of the region from the tensor start

  Index volume() const { return spatial_len * oc_len * ic_len; }
  friend bool operator==(const KernelRegion&, const KernelRegion&) = default;
};

struct InputSplit {
  std::optional<KernelRegion> main;
  std::optional<KernelRegion> tail;
};

// Splits the flattened window range at the last multiple of n_win. Both parts
// span filters [0, oc) and channels [0, ic).
InputSplit split_input_domain(Index total_windows, Index n_win, Index oc = 1, Index ic = 1);

// Recursive K2 -> K3 -> Nc splitting of an aligned region. Each step only
// recurses into its aligned part, so remainders are not split further. Output
// order: innermost aligned region first, then remainders innermost-first.
std::vector<KernelRegion> split_by_strategy(const KernelRegion& region,
                                            const CsaStrategy& strategy, const MkInfo& mk);

// Complete region set for a convolution: structural window and filter tails,
// then the strategy splits of the aligned body.
std::vector<KernelRegion> plan_regions(const ConvInfo& conv, const CsaStrategy& strategy,
                                       const MkInfo& mk);

// True iff the regions are in bounds, pairwise disjoint, and cover the whole
// (ohw x oc x ic) space.
bool coverage_check(const std::vector<KernelRegion>& regions, const ConvInfo& conv);

nlohmann::json regions_to_json(const std::vector<KernelRegion>& regions);

}  // namespace sconv

#endif  // SCONV_REGION_HPP_
