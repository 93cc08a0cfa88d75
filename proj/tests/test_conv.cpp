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

#include <numeric>

#include "sconv/conv.hpp"
#include "test_support.hpp"

namespace sconv {
namespace {

ConvParams square(Index in, Index f, Index stride, Index pad, Index dil) {
  ConvParams p;
  p.ih = p.iw = in;
  p.fh = p.fw = f;
  p.stride_h = p.stride_w = stride;
  p.pad_h = p.pad_w = pad;
  p.dil_h = p.dil_w = dil;
  return p;
}

TEST(OutShape, DirectFormula) {
  EXPECT_EQ(out_shape(square(5, 3, 1, 0, 1)), (OutShape{3, 3}));
  EXPECT_EQ(out_shape(square(7, 3, 2, 0, 1)), (OutShape{3, 3}));
  EXPECT_EQ(out_shape(square(224, 7, 2, 3, 1)), (OutShape{112, 112}));
  EXPECT_EQ(out_shape(square(9, 3, 1, 0, 2)), (OutShape{5, 5}));
}

TEST(OutShape, PointwiseIsIdentity) {
  ConvParams p = square(1, 1, 1, 0, 1);
  p.ih = 13;
  p.iw = 29;
  EXPECT_EQ(out_shape(p), (OutShape{13, 29}));
}

TEST(OutShape, RejectsInvalid) {
  EXPECT_THROW(out_shape(square(2, 3, 1, 0, 1)), Error);
  EXPECT_THROW(out_shape(square(5, 3, 0, 0, 1)), Error);
  EXPECT_THROW(out_shape(square(5, 3, 1, -1, 1)), Error);
  EXPECT_THROW(out_shape(square(5, 3, 1, 0, 3)), Error);
}

TEST(OutShape, MonotoneInStrideAndPadding) {
  for (Index in = 3; in <= 20; ++in) {
    for (Index stride = 1; stride < 4; ++stride) {
      for (Index pad = 0; pad < 3; ++pad) {
        const auto base = out_shape(square(in, 3, stride, pad, 1));
        const auto bigger_stride = out_shape(square(in, 3, stride + 1, pad, 1));
        const auto bigger_pad = out_shape(square(in, 3, stride, pad + 1, 1));
        EXPECT_LE(bigger_stride.oh, base.oh);
        EXPECT_GE(bigger_pad.oh, base.oh);
      }
    }
  }
}

TEST(LinearSpatial, Examples) {
  EXPECT_EQ(linear_spatial(0, 0, 75), 0);
  EXPECT_EQ(linear_spatial(1, 5, 77), 82);
  EXPECT_EQ(delinearize(5625 - 1, 75), (std::pair<Index, Index>{74, 74}));
}

TEST(LinearSpatial, DelinearizeRoundTrip) {
  for (Index width : {1, 7, 75}) {
    for (Index i = 0; i < 5 * width; ++i) {
      const auto [r, c] = delinearize(i, width);
      EXPECT_LT(c, width);
      EXPECT_EQ(linear_spatial(r, c, width), i);
    }
  }
}

TEST(PadInput, ZeroPadIsIdentity) {
  std::mt19937_64 gen(3);
  const auto t = testing::random_tensor({2, 3, 4, 5}, gen);
  const auto padded = pad_input(t, ConvParams{});
  EXPECT_EQ(padded, t);
}

TEST(PadInput, OnesWithBorder) {
  const Tensor4D ones({1, 1, 2, 2}, 1.0f);
  ConvParams p;
  p.pad_h = p.pad_w = 1;
  const auto out = pad_input(ones, p);
  ASSERT_EQ(out.dims(), (Tensor4D::Dims{1, 1, 4, 4}));
  for (Index y = 0; y < 4; ++y) {
    for (Index x = 0; x < 4; ++x) {
      const bool interior = y >= 1 && y <= 2 && x >= 1 && x <= 2;
      EXPECT_EQ(out.at(0, 0, y, x), interior ? 1.0f : 0.0f);
    }
  }
}

TEST(PadInput, PreservesSum) {
  std::mt19937_64 gen(5);
  const auto t = testing::random_tensor({2, 3, 6, 4}, gen);
  ConvParams p;
  p.pad_h = 2;
  p.pad_w = 3;
  const auto out = pad_input(t, p);
  const auto sum = [](std::span<const float> s) {
    return std::accumulate(s.begin(), s.end(), 0.0);
  };
  EXPECT_EQ(out.dims(), (Tensor4D::Dims{2, 3, 10, 10}));
  EXPECT_DOUBLE_EQ(sum(out.data()), sum(t.data()));
}

TEST(Tensor4D, RejectsBadShapes) {
  EXPECT_THROW(Tensor4D({1, 0, 2, 2}), Error);
  EXPECT_THROW(Tensor4D({1, 1, 2, 2}, std::vector<float>(3)), Error);
}

TEST(ConvInfo, FlattenedExtent) {
  const auto info = make_conv_info(square(77, 3, 1, 0, 1));
  EXPECT_EQ(info.oh, 75);
  EXPECT_EQ(info.ow, 75);
  EXPECT_EQ(info.ohw, 5625);
}

}  // namespace
}  // namespace sconv
