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

#ifndef SCONV_CONV_HPP_
#define SCONV_CONV_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sconv {

using Index = std::int64_t;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major f32 tensor with four extents. NCHW for activations, FCHW
// for filters.
class Tensor4D {
 public:
  using Dims = std::array<Index, 4>;

  Tensor4D() = default;
  explicit Tensor4D(Dims dims, float fill = 0.0f);
  Tensor4D(Dims dims, std::vector<float> data);

  const Dims& dims() const { return dims_; }
  Index dim(int axis) const { return dims_[static_cast<std::size_t>(axis)]; }
  Index size() const { return static_cast<Index>(data_.size()); }

  Index offset(Index i0, Index i1, Index i2, Index i3) const {
    return ((i0 * dims_[1] + i1) * dims_[2] + i2) * dims_[3] + i3;
  }
  float& at(Index i0, Index i1, Index i2, Index i3) {
    return data_[static_cast<std::size_t>(offset(i0, i1, i2, i3))];
  }
  float at(Index i0, Index i1, Index i2, Index i3) const {
    return data_[static_cast<std::size_t>(offset(i0, i1, i2, i3))];
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  // Contiguous d2*d3 plane at (i0, i1).
  float* plane(Index i0, Index i1) { return data_.data() + offset(i0, i1, 0, 0); }
  const float* plane(Index i0, Index i1) const {
    return data_.data() + offset(i0, i1, 0, 0);
  }

  friend bool operator==(const Tensor4D&, const Tensor4D&) = default;

 private:
  Dims dims_{1, 1, 1, 1};
  std::vector<float> data_ = std::vector<float>(1, 0.0f);
};

struct ConvParams {
  Index n = 1;
  Index ic = 1;
  Index ih = 1;
  Index iw = 1;
  Index oc = 1;
  Index fh = 1;
  Index fw = 1;
  Index stride_h = 1;
  Index stride_w = 1;
  Index dil_h = 1;
  Index dil_w = 1;
  Index pad_h = 0;
  Index pad_w = 0;

  Tensor4D::Dims input_dims() const { return {n, ic, ih, iw}; }
  Tensor4D::Dims filter_dims() const { return {oc, ic, fh, fw}; }
  Tensor4D::Dims output_dims() const;

  // Same convolution over an input that already carries the zero border.
  ConvParams padded() const;

  friend bool operator==(const ConvParams&, const ConvParams&) = default;
};

// Throws Error when any extent is non-positive or the filter does not fit.
void validate(const ConvParams& p);

struct OutShape {
  Index oh;
  Index ow;
  friend bool operator==(const OutShape&, const OutShape&) = default;
};

OutShape out_shape(const ConvParams& p);

inline Index linear_spatial(Index row, Index col, Index width) {
  return row * width + col;
}

inline std::pair<Index, Index> delinearize(Index linear, Index width) {
  return {linear / width, linear % width};
}

Tensor4D pad_input(const Tensor4D& t, const ConvParams& p);

// Convolution plus its derived output extents. The engine flattens the output
// spatial dimensions into ohw windows.
struct ConvInfo {
  ConvParams params;
  Index oh = 0;
  Index ow = 0;
  Index ohw = 0;
};

ConvInfo make_conv_info(const ConvParams& p);

inline Index flops(const ConvInfo& c) {
  const auto& p = c.params;
  return 2 * p.n * p.oc * c.ohw * p.ic * p.fh * p.fw;
}

std::string to_string(const ConvParams& p);

}  // namespace sconv

#endif  // SCONV_CONV_HPP_
