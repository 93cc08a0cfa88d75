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

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "sconv/csa.hpp"
#include "sconv/region.hpp"
#include "test_support.hpp"

namespace sconv {
namespace {

ConvInfo spatial_conv(Index oh, Index ow, Index ic, Index oc) {
  ConvParams p;
  p.ic = ic;
  p.ih = oh;
  p.iw = ow;
  p.oc = oc;
  return make_conv_info(p);
}

std::vector<Index> spatial_lengths(const std::vector<KernelRegion>& regions) {
  std::vector<Index> out;
  for (const auto& r : regions) out.push_back(r.spatial_len);
  return out;
}

// Exhaustive membership scan: every point of the iteration space must be
// claimed by exactly one region.
bool covers_exactly_once(const std::vector<KernelRegion>& regions, const ConvInfo& conv) {
  const auto& p = conv.params;
  std::vector<int> hits(static_cast<std::size_t>(conv.ohw * p.oc * p.ic), 0);
  for (const auto& r : regions) {
    for (Index s = r.spatial_start; s < r.spatial_start + r.spatial_len; ++s) {
      for (Index o = r.oc_start; o < r.oc_start + r.oc_len; ++o) {
        for (Index c = r.ic_start; c < r.ic_start + r.ic_len; ++c) {
          if (s >= conv.ohw || o >= p.oc || c >= p.ic) return false;
          ++hits[static_cast<std::size_t>((s * p.oc + o) * p.ic + c)];
        }
      }
    }
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

TEST(SplitInputDomain, ReferenceTail) {
  const auto split = split_input_domain(5625, 16);
  ASSERT_TRUE(split.main && split.tail);
  EXPECT_EQ(split.main->spatial_len, 5616);
  EXPECT_EQ(split.main->kind, RegionKind::Main);
  EXPECT_EQ(split.tail->spatial_start, 5616);
  EXPECT_EQ(split.tail->e_off, 5616);
  EXPECT_EQ(split.tail->spatial_len, 9);
  EXPECT_EQ(split.tail->kind, RegionKind::Remainder);
}

TEST(SplitInputDomain, DivisibleHasNoTail) {
  const auto split = split_input_domain(5616, 16);
  ASSERT_TRUE(split.main);
  EXPECT_EQ(split.main->spatial_len, 5616);
  EXPECT_FALSE(split.tail);
}

TEST(SplitInputDomain, SmallerThanOneTile) {
  const auto split = split_input_domain(9, 16);
  EXPECT_FALSE(split.main);
  ASSERT_TRUE(split.tail);
  EXPECT_EQ(split.tail->spatial_start, 0);
  EXPECT_EQ(split.tail->spatial_len, 9);
}

TEST(SplitByStrategy, ReferenceWindowSets) {
  const MkInfo mk{16, 8, 64};
  const auto main = *split_input_domain(5625, 16, 256, 32).main;
  const CsaStrategy s{Schedule::InputStationary, 32, 32, 87, 0, 0, 3};
  const auto regions = split_by_strategy(main, s, mk);
  ASSERT_EQ(regions.size(), 2u);
  EXPECT_EQ(spatial_lengths(regions), (std::vector<Index>{5568, 48}));
  EXPECT_EQ(regions[1].spatial_start, 5568);
  EXPECT_EQ(regions[1].e_off, 5568);
  EXPECT_EQ(regions[1].origin, RegionOrigin::K3Remainder);
  EXPECT_EQ(regions[0].kind, RegionKind::Main);
  EXPECT_EQ(regions[1].kind, RegionKind::Main);
}

TEST(SplitByStrategy, NoRemaindersIsIdentity) {
  const MkInfo mk{16, 8, 64};
  const auto main = *split_input_domain(5616, 16, 256, 32).main;
  const CsaStrategy s{Schedule::InputStationary, 32, 32, 351};
  const auto regions = split_by_strategy(main, s, mk);
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_EQ(regions[0], main);
}

TEST(SplitByStrategy, FilterAndWindowRemaindersGiveThreeKernels) {
  const MkInfo mk{16, 8, 64};
  // 10 filter tiles in sets of 4, 7 window tiles in sets of 3.
  const auto main = *split_input_domain(112, 16, 80, 8).main;
  const CsaStrategy s{Schedule::InputStationary, 8, 4, 3};
  const auto regions = split_by_strategy(main, s, mk);
  ASSERT_EQ(regions.size(), 3u);
  for (const auto& r : regions) EXPECT_EQ(r.kind, RegionKind::Main);
  EXPECT_EQ(regions[0].oc_len, 64);
  EXPECT_EQ(regions[0].spatial_len, 96);
  EXPECT_EQ(regions[1].origin, RegionOrigin::K3Remainder);
  EXPECT_EQ(regions[1].spatial_len, 16);
  EXPECT_EQ(regions[2].origin, RegionOrigin::K2Remainder);
  EXPECT_EQ(regions[2].oc_start, 64);
  EXPECT_EQ(regions[2].oc_len, 16);
  EXPECT_EQ(regions[2].spatial_len, 112);
  EXPECT_TRUE(covers_exactly_once(regions, spatial_conv(1, 112, 8, 80)));
}

TEST(SplitByStrategy, ChannelRemainder) {
  const MkInfo mk{4, 4, 64};
  const auto main = *split_input_domain(16, 4, 8, 10).main;
  const CsaStrategy s{Schedule::InputStationary, 4, 2, 4};
  const auto regions = split_by_strategy(main, s, mk);
  ASSERT_EQ(regions.size(), 2u);
  EXPECT_EQ(regions[0].ic_len, 8);
  EXPECT_EQ(regions[1].ic_start, 8);
  EXPECT_EQ(regions[1].ic_len, 2);
  EXPECT_EQ(regions[1].origin, RegionOrigin::NcRemainder);
}

TEST(PlanRegions, ReferenceConv) {
  const auto conv = spatial_conv(75, 75, 32, 256);
  const MkInfo mk{16, 8, 64};
  const CsaStrategy s{Schedule::InputStationary, 32, 32, 87, 0, 0, 3};
  const auto regions = plan_regions(conv, s, mk);
  EXPECT_EQ(spatial_lengths(regions), (std::vector<Index>{5568, 48, 9}));
  EXPECT_EQ(regions.back().kind, RegionKind::Remainder);
  EXPECT_TRUE(coverage_check(regions, conv));
}

TEST(PlanRegions, FilterTailRunsAsRemainder) {
  const auto conv = spatial_conv(4, 8, 3, 13);
  const MkInfo mk{16, 8, 64};
  const auto regions = plan_regions(conv, CsaStrategy{}, mk);
  ASSERT_EQ(regions.size(), 2u);
  EXPECT_EQ(regions[1].origin, RegionOrigin::FilterTail);
  EXPECT_EQ(regions[1].kind, RegionKind::Remainder);
  EXPECT_EQ(regions[1].oc_start, 8);
  EXPECT_TRUE(coverage_check(regions, conv));
}

TEST(CoverageCheck, RandomSplitsCoverExactly) {
  std::mt19937_64 gen(21);
  for (int i = 0; i < 200; ++i) {
    const auto conv = make_conv_info(testing::random_conv(gen, 20, 40, 10).padded());
    const auto mk = testing::random_mk(gen);
    CsaStrategy s;
    s.nc = testing::pick(gen, 1, conv.params.ic);
    s.k2 = testing::pick(gen, 1, 6);
    s.k3 = testing::pick(gen, 1, 6);
    const auto regions = plan_regions(conv, s, mk);
    ASSERT_LE(conv.ohw * conv.params.oc * conv.params.ic, 1000000);
    EXPECT_TRUE(covers_exactly_once(regions, conv));
    EXPECT_TRUE(coverage_check(regions, conv));
    for (const auto& r : regions) {
      EXPECT_EQ(r.e_off, r.spatial_start);
      if (r.spatial_len < mk.n_win) EXPECT_EQ(r.kind, RegionKind::Remainder);
    }
    EXPECT_EQ(plan_regions(conv, s, mk), regions);
  }
}

TEST(CoverageCheck, DetectsOverlapAndGap) {
  const auto conv = spatial_conv(75, 75, 32, 256);
  const MkInfo mk{16, 8, 64};
  const CsaStrategy s{Schedule::InputStationary, 32, 32, 87, 0, 0, 3};
  const auto regions = plan_regions(conv, s, mk);
  ASSERT_TRUE(coverage_check(regions, conv));

  auto duplicated = regions;
  duplicated.push_back(regions[1]);
  EXPECT_FALSE(coverage_check(duplicated, conv));

  auto dropped = regions;
  dropped.erase(dropped.begin() + 1);
  EXPECT_FALSE(coverage_check(dropped, conv));

  auto shifted = regions;
  shifted[2].e_off += 1;
  EXPECT_FALSE(coverage_check(shifted, conv));
}

TEST(RegionsJson, Fields) {
  const auto json = regions_to_json(plan_regions(spatial_conv(75, 75, 32, 256),
                                                 CsaStrategy{Schedule::InputStationary, 32, 32, 87},
                                                 MkInfo{16, 8, 64}));
  ASSERT_EQ(json.size(), 3u);
  EXPECT_EQ(json[0]["kind"], "main");
  EXPECT_EQ(json[1]["origin"], "k3_remainder");
  EXPECT_EQ(json[2]["origin"], "spatial_tail");
  EXPECT_EQ(json[2]["e_off"], 5616);
  EXPECT_EQ(json[2]["spatial_len"], 9);
}

}  // namespace
}  // namespace sconv
