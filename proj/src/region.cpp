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

#include "sconv/region.hpp"

namespace sconv {

namespace {

KernelRegion make_region(Index s0, Index slen, Index o0, Index olen, Index c0, Index clen,
                         RegionOrigin origin) {
  KernelRegion r;
  r.spatial_start = s0;
  r.spatial_len = slen;
  r.oc_start = o0;
  r.oc_len = olen;
  r.ic_start = c0;
  r.ic_len = clen;
  r.origin = origin;
  r.e_off = s0;
  return r;
}

void classify(KernelRegion& r, const MkInfo& mk) {
  const bool full = r.spatial_len >= mk.n_win && r.oc_len >= mk.n_f &&
                    r.spatial_len % mk.n_win == 0 && r.oc_len % mk.n_f == 0;
  r.kind = full ? RegionKind::Main : RegionKind::Remainder;
}

// Splits the tile count of one dimension into an aligned multiple of `set` and
// a remainder. Returns nothing when there is no remainder or no aligned part.
std::optional<std::pair<Index, Index>> set_split(Index tiles, Index set) {
  const Index rem = tiles % set;
  if (rem == 0 || rem == tiles) return std::nullopt;
  return std::make_pair(tiles - rem, rem);
}

void split_nc(const KernelRegion& r, const CsaStrategy& s, const MkInfo& mk,
              std::vector<KernelRegion>& out) {
  const auto parts = set_split(r.ic_len, s.nc);
  if (!parts) {
    out.push_back(r);
    return;
  }
  KernelRegion body = r;
  body.ic_len = parts->first;
  KernelRegion rem = r;
  rem.ic_start = r.ic_start + parts->first;
  rem.ic_len = parts->second;
  rem.origin = RegionOrigin::NcRemainder;
  classify(body, mk);
  classify(rem, mk);
  out.push_back(body);
  out.push_back(rem);
}

void split_k3(const KernelRegion& r, const CsaStrategy& s, const MkInfo& mk,
              std::vector<KernelRegion>& out) {
  const auto parts = set_split(r.spatial_len / mk.n_win, s.k3);
  if (!parts) {
    split_nc(r, s, mk, out);
    return;
  }
  KernelRegion body = r;
  body.spatial_len = parts->first * mk.n_win;
  KernelRegion rem = r;
  rem.spatial_start = r.spatial_start + body.spatial_len;
  rem.e_off = rem.spatial_start;
  rem.spatial_len = parts->second * mk.n_win;
  rem.origin = RegionOrigin::K3Remainder;
  classify(body, mk);
  classify(rem, mk);
  split_nc(body, s, mk, out);
  out.push_back(rem);
}

}  // namespace

std::string_view to_string(RegionKind k) { return k == RegionKind::Main ? "main" : "remainder"; }

std::string_view to_string(RegionOrigin o) {
  switch (o) {
    case RegionOrigin::Body: return "body";
    case RegionOrigin::SpatialTail: return "spatial_tail";
    case RegionOrigin::FilterTail: return "filter_tail";
    case RegionOrigin::K2Remainder: return "k2_remainder";
    case RegionOrigin::K3Remainder: return "k3_remainder";
    case RegionOrigin::NcRemainder: return "nc_remainder";
  }
  return "?";
}

InputSplit split_input_domain(Index total_windows, Index n_win, Index oc, Index ic) {
  InputSplit out;
  const Index aligned = total_windows / n_win * n_win;
  if (aligned > 0) {
    out.main = make_region(0, aligned, 0, oc, 0, ic, RegionOrigin::Body);
    out.main->kind = RegionKind::Main;
  }
  if (aligned < total_windows) {
    out.tail = make_region(aligned, total_windows - aligned, 0, oc, 0, ic,
                           RegionOrigin::SpatialTail);
    out.tail->kind = RegionKind::Remainder;
  }
  return out;
}

std::vector<KernelRegion> split_by_strategy(const KernelRegion& region,
                                            const CsaStrategy& strategy, const MkInfo& mk) {
  std::vector<KernelRegion> out;
  const auto parts = set_split(region.oc_len / mk.n_f, strategy.k2);
  if (!parts) {
    split_k3(region, strategy, mk, out);
    return out;
  }
  KernelRegion body = region;
  body.oc_len = parts->first * mk.n_f;
  KernelRegion rem = region;
  rem.oc_start = region.oc_start + body.oc_len;
  rem.oc_len = parts->second * mk.n_f;
  rem.origin = RegionOrigin::K2Remainder;
  classify(body, mk);
  classify(rem, mk);
  split_k3(body, strategy, mk, out);
  out.push_back(rem);
  return out;
}

std::vector<KernelRegion> plan_regions(const ConvInfo& conv, const CsaStrategy& strategy,
                                       const MkInfo& mk) {
  const auto& p = conv.params;
  const auto spatial = split_input_domain(conv.ohw, mk.n_win, p.oc, p.ic);
  std::vector<KernelRegion> out;

  if (spatial.main) {
    const Index oc_aligned = p.oc / mk.n_f * mk.n_f;
    if (oc_aligned > 0) {
      KernelRegion body = *spatial.main;
      body.oc_len = oc_aligned;
      classify(body, mk);
      auto split = split_by_strategy(body, strategy, mk);
      out.insert(out.end(), split.begin(), split.end());
    }
    if (oc_aligned < p.oc) {
      KernelRegion tail = *spatial.main;
      tail.oc_start = oc_aligned;
      tail.oc_len = p.oc - oc_aligned;
      tail.origin = RegionOrigin::FilterTail;
      tail.kind = RegionKind::Remainder;
      out.push_back(tail);
    }
  }
  if (spatial.tail) out.push_back(*spatial.tail);
  return out;
}

bool coverage_check(const std::vector<KernelRegion>& regions, const ConvInfo& conv) {
  const auto& p = conv.params;
  Index covered = 0;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& a = regions[i];
    if (a.spatial_len < 1 || a.oc_len < 1 || a.ic_len < 1) return false;
    if (a.spatial_start < 0 || a.oc_start < 0 || a.ic_start < 0) return false;
    if (a.spatial_start + a.spatial_len > conv.ohw || a.oc_start + a.oc_len > p.oc ||
        a.ic_start + a.ic_len > p.ic) {
      return false;
    }
    if (a.e_off != a.spatial_start) return false;
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      const auto& b = regions[j];
      const bool apart =
          a.spatial_start + a.spatial_len <= b.spatial_start ||
          b.spatial_start + b.spatial_len <= a.spatial_start ||
          a.oc_start + a.oc_len <= b.oc_start || b.oc_start + b.oc_len <= a.oc_start ||
          a.ic_start + a.ic_len <= b.ic_start || b.ic_start + b.ic_len <= a.ic_start;
      if (!apart) return false;
    }
    covered += a.volume();
  }
  // Disjoint in-bounds boxes cover the space exactly when volumes add up.
  return covered == conv.ohw * p.oc * p.ic;
}

nlohmann::json regions_to_json(const std::vector<KernelRegion>& regions) {
  auto out = nlohmann::json::array();
  for (const auto& r : regions) {
    out.push_back({{"kind", to_string(r.kind)},
                   {"origin", to_string(r.origin)},
                   {"spatial_start", r.spatial_start},
                   {"spatial_len", r.spatial_len},
                   {"oc_start", r.oc_start},
                   {"oc_len", r.oc_len},
                   {"ic_start", r.ic_start},
                   {"ic_len", r.ic_len},
                   {"e_off", r.e_off}});
  }
  return out;
}

}  // namespace sconv
