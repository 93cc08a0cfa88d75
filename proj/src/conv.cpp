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

#include "sconv/conv.hpp"

#include <algorithm>
#include <sstream>

namespace sconv {

namespace {

Index dims_product(const Tensor4D::Dims& d) {
  Index total = 1;
  for (Index e : d) {
    if (e < 1) throw Error("tensor extents must be >= 1");
    total *= e;
  }
  return total;
}

}  // namespace

Tensor4D::Tensor4D(Dims dims, float fill)
    : dims_(dims), data_(static_cast<std::size_t>(dims_product(dims)), fill) {}

Tensor4D::Tensor4D(Dims dims, std::vector<float> data)
    : dims_(dims), data_(std::move(data)) {
  if (static_cast<Index>(data_.size()) != dims_product(dims_)) {
    throw Error("tensor data length does not match extents");
  }
}

void validate(const ConvParams& p) {
  const Index positive[] = {p.n,  p.ic,       p.ih,       p.iw,    p.oc,   p.fh,
                            p.fw, p.stride_h, p.stride_w, p.dil_h, p.dil_w};
  for (Index v : positive) {
    if (v < 1) throw Error("convolution extents, strides and dilations must be >= 1: " + to_string(p));
  }
  if (p.pad_h < 0 || p.pad_w < 0) throw Error("padding must be non-negative: " + to_string(p));
  if (p.dil_h * (p.fh - 1) >= p.ih + 2 * p.pad_h ||
      p.dil_w * (p.fw - 1) >= p.iw + 2 * p.pad_w) {
    throw Error("dilated filter does not fit the padded input: " + to_string(p));
  }
}

OutShape out_shape(const ConvParams& p) {
  validate(p);
  const Index oh = (p.ih + 2 * p.pad_h - p.dil_h * (p.fh - 1) - 1) / p.stride_h + 1;
  const Index ow = (p.iw + 2 * p.pad_w - p.dil_w * (p.fw - 1) - 1) / p.stride_w + 1;
  if (oh < 1 || ow < 1) throw Error("empty output: " + to_string(p));
  return {oh, ow};
}

Tensor4D::Dims ConvParams::output_dims() const {
  const auto [oh, ow] = out_shape(*this);
  return {n, oc, oh, ow};
}

ConvParams ConvParams::padded() const {
  ConvParams q = *this;
  q.ih += 2 * pad_h;
  q.iw += 2 * pad_w;
  q.pad_h = 0;
  q.pad_w = 0;
  return q;
}

Tensor4D pad_input(const Tensor4D& t, const ConvParams& p) {
  if (p.pad_h == 0 && p.pad_w == 0) return t;
  const auto& d = t.dims();
  Tensor4D out({d[0], d[1], d[2] + 2 * p.pad_h, d[3] + 2 * p.pad_w});
  for (Index b = 0; b < d[0]; ++b) {
    for (Index c = 0; c < d[1]; ++c) {
      for (Index r = 0; r < d[2]; ++r) {
        const float* src = t.plane(b, c) + r * d[3];
        std::copy(src, src + d[3], &out.at(b, c, r + p.pad_h, p.pad_w));
      }
    }
  }
  return out;
}

ConvInfo make_conv_info(const ConvParams& p) {
  const auto [oh, ow] = out_shape(p);
  return ConvInfo{p, oh, ow, oh * ow};
}

std::string to_string(const ConvParams& p) {
  std::ostringstream os;
  os << "n=" << p.n << " ic=" << p.ic << " ih=" << p.ih << " iw=" << p.iw << " oc=" << p.oc
     << " fh=" << p.fh << " fw=" << p.fw << " stride=" << p.stride_h << "x" << p.stride_w
     << " dil=" << p.dil_h << "x" << p.dil_w << " pad=" << p.pad_h << "x" << p.pad_w;
  return os.str();
}

}  // namespace sconv
