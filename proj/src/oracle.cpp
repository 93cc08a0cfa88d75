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

#include "sconv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sconv::oracle {

namespace {

// Input value under padding, zero outside the tensor.
float tap(const Tensor4D& input, const ConvParams& p, Index b, Index c, Index y, Index x) {
  y -= p.pad_h;
  x -= p.pad_w;
  if (y < 0 || y >= p.ih || x < 0 || x >= p.iw) return 0.0f;
  return input.at(b, c, y, x);
}

void check_shapes(const Tensor4D& input, const ConvParams& p) {
  validate(p);
  if (input.dims() != p.input_dims()) throw Error("oracle: input shape mismatch");
}

}  // namespace

Tensor4D naive_conv(const Tensor4D& input, const Tensor4D& filters, const ConvParams& p) {
  check_shapes(input, p);
  if (filters.dims() != p.filter_dims()) throw Error("oracle: filter shape mismatch");
  const auto [oh, ow] = out_shape(p);
  Tensor4D out({p.n, p.oc, oh, ow});
  for (Index b = 0; b < p.n; ++b) {
    for (Index o = 0; o < p.oc; ++o) {
      for (Index y = 0; y < oh; ++y) {
        for (Index x = 0; x < ow; ++x) {
          double sum = 0.0;
          for (Index c = 0; c < p.ic; ++c) {
            for (Index kh = 0; kh < p.fh; ++kh) {
              for (Index kw = 0; kw < p.fw; ++kw) {
                sum += static_cast<double>(filters.at(o, c, kh, kw)) *
                       tap(input, p, b, c, y * p.stride_h + kh * p.dil_h,
                           x * p.stride_w + kw * p.dil_w);
              }
            }
          }
          out.at(b, o, y, x) = static_cast<float>(sum);
        }
      }
    }
  }
  return out;
}

Im2colMatrix im2col(const Tensor4D& input, const ConvParams& p, Index batch) {
  check_shapes(input, p);
  const auto [oh, ow] = out_shape(p);
  Im2colMatrix m;
  m.rows = p.ic * p.fh * p.fw;
  m.cols = oh * ow;
  m.data.resize(static_cast<std::size_t>(m.rows * m.cols));
  for (Index c = 0; c < p.ic; ++c) {
    for (Index kh = 0; kh < p.fh; ++kh) {
      for (Index kw = 0; kw < p.fw; ++kw) {
        const Index row = (c * p.fh + kh) * p.fw + kw;
        for (Index y = 0; y < oh; ++y) {
          for (Index x = 0; x < ow; ++x) {
            m.data[static_cast<std::size_t>(row * m.cols + y * ow + x)] =
                tap(input, p, batch, c, y * p.stride_h + kh * p.dil_h,
                    x * p.stride_w + kw * p.dil_w);
          }
        }
      }
    }
  }
  return m;
}

double max_rel_error(const Tensor4D& got, const Tensor4D& want) {
  if (got.dims() != want.dims()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  const auto g = got.data();
  const auto w = want.data();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double ref = w[i];
    const double err = std::abs(static_cast<double>(g[i]) - ref) / std::max(std::abs(ref), 1.0);
    if (std::isnan(err)) return err;
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace sconv::oracle
