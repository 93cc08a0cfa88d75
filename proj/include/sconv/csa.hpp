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

#ifndef SCONV_CSA_HPP_
#define SCONV_CSA_HPP_

#include <string_view>

#include "sconv/arch.hpp"
#include "sconv/conv.hpp"

namespace sconv {

enum class Schedule { InputStationary, WeightStationary };

std::string_view to_string(Schedule s);

// Tiling strategy for one convolution.
//
//   nc  input channels per tile (layer 5)
//   k2  filter tiles (n_f filters each) per filter set
//   k3  window tiles (n_win windows each) per window set
//
// The schedule picks which tensor stays resident: under InputStationary the
// window set is the outer set and filter sets are multipacked inside it;
// WeightStationary mirrors that.
struct CsaStrategy {
  Schedule schedule = Schedule::InputStationary;
  Index nc = 1;
  Index k2 = 1;
  Index k3 = 1;
  Index r_nc = 0;
  Index r_k2 = 0;
  Index r_k3 = 0;

  friend bool operator==(const CsaStrategy&, const CsaStrategy&) = default;
};

struct Remainders {
  Index r_nc;
  Index r_k2;
  Index r_k3;
  friend bool operator==(const Remainders&, const Remainders&) = default;
};

// Element counts of the L1-resident tiles for a given channel depth.
Index input_tile_elems(const ConvInfo& conv, const MkInfo& mk, Index nc);
Index filter_tile_elems(const ConvInfo& conv, const MkInfo& mk, Index nc);
Index output_tile_elems(const MkInfo& mk);

// Bytes of one input, one filter and one output tile together.
Index l1_footprint_bytes(const ConvInfo& conv, const MkInfo& mk, Index nc);

// Full tiles available along each tiled dimension (at least 1).
Index window_tile_count(const ConvInfo& conv, const MkInfo& mk);
Index filter_tile_count(const ConvInfo& conv, const MkInfo& mk);

Remainders remainders(const ConvInfo& conv, const MkInfo& mk, Index nc, Index k2, Index k3);

// Estimated memory traffic in bytes for the candidate's schedule.
Index cost_model(const ConvInfo& conv, const MkInfo& mk, const CsaStrategy& candidate);

// Throws Error("tile exceeds L1") when even a single channel does not fit.
CsaStrategy analyze(const ConvInfo& conv, const ArchInfo& arch, const MkInfo& mk);

}  // namespace sconv

#endif  // SCONV_CSA_HPP_
