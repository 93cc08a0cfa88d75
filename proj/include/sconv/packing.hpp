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

#ifndef SCONV_PACKING_HPP_
#define SCONV_PACKING_HPP_

#include <array>
#include <iosfwd>
#include <vector>

#include "sconv/arch.hpp"
#include "sconv/conv.hpp"
#include "sconv/csa.hpp"
#include "sconv/region.hpp"

namespace sconv {

enum class PackKind { Filter, Input };

// One or more packed tiles stored back to back. A filter tile has logical
// shape (nc, fh, fw, n_f), an input tile (nc, fh, fw, n_win); both read as a
// K x n matrix with K = nc*fh*fw, which is what the microkernel consumes.
struct PackedTile {
  PackKind kind = PackKind::Filter;
  std::array<Index, 4> logical_shape{0, 0, 0, 0};
  Index nt = 0;
  std::vector<float> data;

  Index reduction() const { return logical_shape[0] * logical_shape[1] * logical_shape[2]; }
  Index width() const { return logical_shape[3]; }
  Index tile_elems() const { return reduction() * width(); }
  const float* tile(Index i_nt) const { return data.data() + i_nt * tile_elems(); }

  // Resizes without releasing capacity so buffers can be reused per region.
  void reshape(PackKind k, std::array<Index, 4> shape, Index count);
};

struct FilterIndex {
  Index filter;
  Index channel;
  Index row;
  Index col;
  friend bool operator==(const FilterIndex&, const FilterIndex&) = default;
};

// Source element (relative to the filter slice) of packed position
// [i_nt][i_nc][i_fh][i_fw][i_nf].
inline FilterIndex filter_pack_index(Index i_nc, Index i_fh, Index i_fw, Index i_nf, Index i_nt,
                                     const MkInfo& mk) {
  return {i_nt * mk.n_f + i_nf, i_nc, i_fh, i_fw};
}

// Filters [oc_start, oc_start + nt*n_f) over channels [ic_start, ic_start + nc).
struct FilterSlice {
  Index oc_start = 0;
  Index ic_start = 0;
  Index nc = 1;
};

void pack_filter(const Tensor4D& filters, const FilterSlice& slice, const MkInfo& mk, Index nt,
                 PackedTile& out);

// Packs the first nt filter tiles of the region at its first channel block.
PackedTile pack_filter(const Tensor4D& filters, const KernelRegion& region,
                       const CsaStrategy& strategy, const MkInfo& mk, Index nt);

// Tile-relative index when the whole tile lies in one row of windows. tile_w
// is the row pitch of the tile (n_win + fw - 1 for a materialised unit-stride
// tile, the input width when the tile is a view of the input).
inline Index input_pack_index_simple(Index i_fh, Index i_fw, Index i_nwin, const ConvParams& p,
                                     Index tile_w) {
  const Index row = i_fh * p.dil_h;
  const Index col = i_nwin * p.stride_w + i_fw * p.dil_w;
  return row * tile_w + col;
}

// Tile-relative index allowing row breaks inside the tile. The tile starts at
// window i_oout + i_oin + e_off; i_nt selects the tile within a multipack.
// The column term may be negative, the slice then spans full input rows and
// tile_w must be the input width.
inline Index input_pack_index_general(Index i_oout, Index i_oin, Index i_nwin, Index i_fh,
                                      Index i_fw, Index i_nt, Index e_off, const ConvInfo& conv,
                                      Index n_win, Index tile_w) {
  const auto& p = conv.params;
  const Index start = i_oout + i_oin + e_off;
  const Index window = start + i_nt * n_win + i_nwin;
  const Index row = (window / conv.ow - start / conv.ow) * p.stride_h + i_fh * p.dil_h;
  const Index col = (window % conv.ow - start % conv.ow) * p.stride_w + i_fw * p.dil_w;
  return row * tile_w + col;
}

// Offset inside one input channel plane of the top-left input element read by
// window `start`.
inline Index input_slice_origin(Index start, const ConvInfo& conv) {
  const auto& p = conv.params;
  return (start / conv.ow) * p.stride_h * p.iw + (start % conv.ow) * p.stride_w;
}

// True when windows [start, start + n_win) share one output row.
inline bool tile_in_one_row(Index start, Index n_win, const ConvInfo& conv) {
  return start % conv.ow + n_win <= conv.ow;
}

// Which input tile(s) to pack: channels [ic_start, ic_start + nc) of batch
// `batch`, windows starting at i_oout + i_oin + e_off. Loop iterators are
// relative to the region; e_off is the region's offset.
struct InputSlice {
  Index batch = 0;
  Index ic_start = 0;
  Index nc = 1;
  Index e_off = 0;
  Index i_oout = 0;
  Index i_oin = 0;
};

// `input` must be pre-padded and `conv` describe it with zero padding.
// Throws Error when a window reads outside the input plane.
void pack_input(const Tensor4D& input, const ConvInfo& conv, const InputSlice& slice,
                const MkInfo& mk, Index nt, PackedTile& out);

PackedTile pack_input(const Tensor4D& input, const ConvInfo& conv, const KernelRegion& region,
                      Index i_oout, Index i_oin, const CsaStrategy& strategy, const MkInfo& mk,
                      Index nt);

// Text dump: a header line, then K rows of `width` values per tile.
void dump_packed(std::ostream& os, const PackedTile& tile);

}  // namespace sconv

#endif  // SCONV_PACKING_HPP_
