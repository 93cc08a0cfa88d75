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

#include "sconv/csa.hpp"

#include <algorithm>
#include <vector>

namespace sconv {

namespace {

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

// Channel depths tried for nc, largest first: ic itself, then multiples of
// one cache line worth of elements, then anything smaller.
std::vector<Index> nc_candidates(Index ic, Index granule) {
  std::vector<Index> out{ic};
  for (Index m = (ic - 1) / granule * granule; m >= granule; m -= granule) out.push_back(m);
  for (Index m = std::min(granule, ic) - 1; m >= 1; --m) out.push_back(m);
  return out;
}

}  // namespace

std::string_view to_string(Schedule s) {
  return s == Schedule::InputStationary ? "IS" : "WS";
}

Index input_tile_elems(const ConvInfo& conv, const MkInfo& mk, Index nc) {
  return nc * conv.params.fh * (mk.n_win + conv.params.fw - 1);
}

Index filter_tile_elems(const ConvInfo& conv, const MkInfo& mk, Index nc) {
  return mk.n_f * nc * conv.params.fh * conv.params.fw;
}

Index output_tile_elems(const MkInfo& mk) { return mk.n_f * mk.n_win; }

Index l1_footprint_bytes(const ConvInfo& conv, const MkInfo& mk, Index nc) {
  return (input_tile_elems(conv, mk, nc) + filter_tile_elems(conv, mk, nc) +
          output_tile_elems(mk)) *
         kElementBytes;
}

Index window_tile_count(const ConvInfo& conv, const MkInfo& mk) {
  return std::max<Index>(1, conv.ohw / mk.n_win);
}

Index filter_tile_count(const ConvInfo& conv, const MkInfo& mk) {
  return std::max<Index>(1, conv.params.oc / mk.n_f);
}

Remainders remainders(const ConvInfo& conv, const MkInfo& mk, Index nc, Index k2, Index k3) {
  return Remainders{conv.params.ic % nc, filter_tile_count(conv, mk) % k2,
                    window_tile_count(conv, mk) % k3};
}

Index cost_model(const ConvInfo& conv, const MkInfo& mk, const CsaStrategy& candidate) {
  const auto& p = conv.params;
  const Index input_bytes = p.n * p.ic * p.ih * p.iw * kElementBytes;
  const Index filter_bytes = p.oc * p.ic * p.fh * p.fw * kElementBytes;
  const Index output_bytes = p.n * p.oc * conv.ohw * kElementBytes;
  const Index window_tiles = window_tile_count(conv, mk);
  const Index filter_tiles = filter_tile_count(conv, mk);

  Index stationary = 0;
  Index streamed = 0;
  Index reloads = 1;
  if (candidate.schedule == Schedule::InputStationary) {
    stationary = input_bytes;
    streamed = filter_bytes;
    // Filters stay cached when one set already holds all of them.
    if (candidate.k2 < filter_tiles) reloads = ceil_div(window_tiles, candidate.k3);
  } else {
    stationary = filter_bytes;
    streamed = input_bytes;
    if (candidate.k3 < window_tiles) reloads = ceil_div(filter_tiles, candidate.k2);
  }
  return stationary + streamed * reloads + output_bytes * ceil_div(p.ic, candidate.nc);
}

CsaStrategy analyze(const ConvInfo& conv, const ArchInfo& arch, const MkInfo& mk) {
  validate(conv.params);
  validate(arch);
  validate(mk);

  const Index ic = conv.params.ic;
  const Index granule = std::max<Index>(1, arch.cache_line_bytes / kElementBytes);

  Index nc = 0;
  for (Index cand : nc_candidates(ic, granule)) {
    if (l1_footprint_bytes(conv, mk, cand) <= arch.l1_bytes) {
      nc = cand;
      break;
    }
  }
  if (nc == 0) throw Error("tile exceeds L1");

  // Set sizes use full-depth tiles so that they do not depend on nc.
  const Index in_tile = input_tile_elems(conv, mk, ic) * kElementBytes;
  const Index f_tile = filter_tile_elems(conv, mk, ic) * kElementBytes;

  const Index k2 =
      std::clamp<Index>((arch.l2_bytes - in_tile) / f_tile, 1, filter_tile_count(conv, mk));
  const Index outer_budget = arch.l3_bytes > 0 ? arch.l3_bytes : arch.l2_bytes;
  const Index k3 =
      std::clamp<Index>((outer_budget - f_tile) / in_tile, 1, window_tile_count(conv, mk));

  const auto rem = remainders(conv, mk, nc, k2, k3);
  CsaStrategy s{Schedule::InputStationary, nc, k2, k3, rem.r_nc, rem.r_k2, rem.r_k3};

  CsaStrategy ws = s;
  ws.schedule = Schedule::WeightStationary;
  if (cost_model(conv, mk, ws) < cost_model(conv, mk, s)) s.schedule = Schedule::WeightStationary;
  return s;
}

}  // namespace sconv
