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

#ifndef SCONV_ORACLE_HPP_
#define SCONV_ORACLE_HPP_

#include <vector>

#include "sconv/conv.hpp"

namespace sconv::oracle {

// Reference convolutions used as ground truth. Both read the unpadded input
// and treat out-of-range taps as zero, independent of the engine's padding
// and packing paths.

// Seven-deep scalar loop nest, f64 accumulation.
Tensor4D naive_conv(const Tensor4D& input, const Tensor4D& filters, const ConvParams& p);

// K x (oh*ow) matrix, K = ic*fh*fw ordered (channel, row, col).
struct Im2colMatrix {
  Index rows = 0;
  Index cols = 0;
  std::vector<float> data;

  float at(Index r, Index c) const { return data[static_cast<std::size_t>(r * cols + c)]; }
};

Im2colMatrix im2col(const Tensor4D& input, const ConvParams& p, Index batch = 0);

// Largest |got - want| / max(|want|, 1) over all elements.
double max_rel_error(const Tensor4D& got, const Tensor4D& want);

}  // namespace sconv::oracle

#endif  // SCONV_ORACLE_HPP_
