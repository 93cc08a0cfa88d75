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

#include <cmath>
#include <limits>

#include "sconv/oracle.hpp"
#include "test_support.hpp"

namespace sconv {
namespace {

TEST(NaiveConv, OnesSumToNine) {
  ConvParams p;
  p.ih = p.iw = 3;
  p.fh = p.fw = 3;
  const Tensor4D input({1, 1, 3, 3}, 1.0f);
  const Tensor4D filters({1, 1, 3, 3}, 1.0f);
  const auto out = oracle::naive_conv(input, filters, p);
  ASSERT_EQ(out.size(), 1);
  EXPECT_EQ(out.data()[0], 9.0f);
}

TEST(NaiveConv, IdentityFilterReproducesInput) {
  std::mt19937_64 gen(51);
  ConvParams p;
  p.ic = 1;
  p.ih = 6;
  p.iw = 9;
  p.fh = p.fw = 3;
  p.pad_h = p.pad_w = 1;
  const auto input = testing::random_tensor(p.input_dims(), gen);
  Tensor4D filters({1, 1, 3, 3});
  filters.at(0, 0, 1, 1) = 1.0f;
  EXPECT_EQ(oracle::naive_conv(input, filters, p), input);
}

TEST(NaiveConv, MatchesScatterFormulation) {
  std::mt19937_64 gen(52);
  ConvParams p;
  p.n = 2;
  p.ic = 4;
  p.ih = p.iw = 6;
  p.oc = 3;
  p.fh = p.fw = 3;
  p.stride_h = p.stride_w = 2;
  const auto input = testing::random_tensor(p.input_dims(), gen);
  const auto filters = testing::random_tensor(p.filter_dims(), gen);
  EXPECT_LE(oracle::max_rel_error(oracle::naive_conv(input, filters, p),
                                  testing::scatter_conv(input, filters, p)),
            1e-6);

  for (int i = 0; i < 30; ++i) {
    const auto q = testing::random_conv(gen, 6, 6, 8);
    const auto in = testing::random_tensor(q.input_dims(), gen);
    const auto f = testing::random_tensor(q.filter_dims(), gen);
    EXPECT_LE(oracle::max_rel_error(oracle::naive_conv(in, f, q), testing::scatter_conv(in, f, q)),
              1e-6)
        << to_string(q);
  }
}

TEST(NaiveConv, ShapeMismatchIsAnError) {
  ConvParams p;
  p.ic = 2;
  p.ih = p.iw = 4;
  EXPECT_THROW(oracle::naive_conv(Tensor4D({1, 1, 4, 4}), Tensor4D({1, 2, 1, 1}), p), Error);
}

TEST(Im2col, PointwiseIsFlattenedInput) {
  std::mt19937_64 gen(53);
  ConvParams p;
  p.ic = 3;
  p.ih = 4;
  p.iw = 5;
  const auto input = testing::random_tensor(p.input_dims(), gen);
  const auto m = oracle::im2col(input, p);
  ASSERT_EQ(m.rows, 3);
  ASSERT_EQ(m.cols, 20);
  for (Index c = 0; c < 3; ++c) {
    for (Index s = 0; s < 20; ++s) EXPECT_EQ(m.at(c, s), input.plane(0, c)[s]);
  }
}

TEST(Im2col, FilterMatrixTimesColumnsEqualsConv) {
  std::mt19937_64 gen(54);
  for (int i = 0; i < 30; ++i) {
    const auto p = testing::random_conv(gen, 6, 6, 8);
    const auto input = testing::random_tensor(p.input_dims(), gen);
    const auto filters = testing::random_tensor(p.filter_dims(), gen);
    const auto want = oracle::naive_conv(input, filters, p);
    const Index k = p.ic * p.fh * p.fw;
    const std::vector<double> a(filters.data().begin(), filters.data().end());
    for (Index b = 0; b < p.n; ++b) {
      const auto cols = oracle::im2col(input, p, b);
      const std::vector<double> m(cols.data.begin(), cols.data.end());
      const auto got = testing::matmul(a, m, p.oc, k, cols.cols);
      for (Index o = 0; o < p.oc; ++o) {
        for (Index s = 0; s < cols.cols; ++s) {
          EXPECT_FLOAT_EQ(static_cast<float>(got[static_cast<std::size_t>(o * cols.cols + s)]),
                          want.plane(b, o)[s]);
        }
      }
    }
  }
}

TEST(Im2col, DilationSpotCheck) {
  ConvParams p;
  p.ih = p.iw = 7;
  p.fh = p.fw = 3;
  p.dil_h = p.dil_w = 2;
  Tensor4D input({1, 1, 7, 7});
  for (Index y = 0; y < 7; ++y) {
    for (Index x = 0; x < 7; ++x) input.at(0, 0, y, x) = static_cast<float>(10 * y + x);
  }
  const auto m = oracle::im2col(input, p);
  ASSERT_EQ(m.cols, 9);
  // Window (1, 2), tap (2, 1): input row 1 + 2*2 = 5, column 2 + 1*2 = 4.
  EXPECT_EQ(m.at(2 * 3 + 1, 1 * 3 + 2), 54.0f);
}

TEST(Im2col, PaddingReadsZero) {
  ConvParams p;
  p.ih = p.iw = 2;
  p.fh = p.fw = 3;
  p.pad_h = p.pad_w = 1;
  const Tensor4D input({1, 1, 2, 2}, 1.0f);
  const auto m = oracle::im2col(input, p);
  EXPECT_EQ(m.at(0, 0), 0.0f);
  EXPECT_EQ(m.at(4, 0), 1.0f);
}

TEST(MaxRelError, Semantics) {
  const Tensor4D a({1, 1, 1, 2}, std::vector<float>{1.0f, 200.0f});
  const Tensor4D b({1, 1, 1, 2}, std::vector<float>{1.5f, 202.0f});
  EXPECT_DOUBLE_EQ(oracle::max_rel_error(a, a), 0.0);
  EXPECT_NEAR(oracle::max_rel_error(a, b), 0.5 / 1.5, 1e-12);
  const Tensor4D nan({1, 1, 1, 2},
                     std::vector<float>{std::numeric_limits<float>::quiet_NaN(), 200.0f});
  EXPECT_TRUE(std::isnan(oracle::max_rel_error(nan, a)));
  EXPECT_TRUE(std::isinf(oracle::max_rel_error(a, Tensor4D({1, 1, 2, 1}))));
}

}  // namespace
}  // namespace sconv
