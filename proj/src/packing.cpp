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

#include "sconv/packing.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace sconv {

void PackedTile::reshape(PackKind k, std::array<Index, 4> shape, Index count) {
  kind = k;
  logical_shape = shape;
  nt = count;
  data.resize(static_cast<std::size_t>(shape[0] * shape[1] * shape[2] * shape[3] * count));
}

void pack_filter(const Tensor4D& filters, const FilterSlice& slice, const MkInfo& mk, Index nt,
                 PackedTile& out) {
  const Index fh = filters.dim(2);
  const Index fw = filters.dim(3);
  if (slice.oc_start < 0 || slice.oc_start + nt * mk.n_f > filters.dim(0) ||
      slice.ic_start < 0 || slice.ic_start + slice.nc > filters.dim(1)) {
    throw Error("filter pack range exceeds the filter tensor");
  }
  out.reshape(PackKind::Filter, {slice.nc, fh, fw, mk.n_f}, nt);

  // Gather out of order, store in order.
  float* dst = out.data.data();
  for (Index t = 0; t < nt; ++t) {
    for (Index c = 0; c < slice.nc; ++c) {
      for (Index kh = 0; kh < fh; ++kh) {
        for (Index kw = 0; kw < fw; ++kw) {
          for (Index f = 0; f < mk.n_f; ++f) {
            const auto src = filter_pack_index(c, kh, kw, f, t, mk);
            *dst++ = filters.at(slice.oc_start + src.filter, slice.ic_start + src.channel,
                                src.row, src.col);
          }
        }
      }
    }
  }
}

PackedTile pack_filter(const Tensor4D& filters, const KernelRegion& region,
                       const CsaStrategy& strategy, const MkInfo& mk, Index nt) {
  PackedTile out;
  pack_filter(filters,
              FilterSlice{region.oc_start, region.ic_start, std::min(strategy.nc, region.ic_len)},
              mk, nt, out);
  return out;
}

void pack_input(const Tensor4D& input, const ConvInfo& conv, const InputSlice& slice,
                const MkInfo& mk, Index nt, PackedTile& out) {
  const auto& p = conv.params;
  if (p.pad_h != 0 || p.pad_w != 0) throw Error("pack_input expects a pre-padded input");
  if (input.dim(2) != p.ih || input.dim(3) != p.iw) throw Error("input does not match conv");
  if (slice.ic_start < 0 || slice.ic_start + slice.nc > input.dim(1)) {
    throw Error("input pack channel range exceeds the input tensor");
  }
  const Index n_win = mk.n_win;
  const Index start = slice.i_oout + slice.i_oin + slice.e_off;
  if (start < 0 || start + nt * n_win > conv.ohw) {
    throw Error("input pack window range exceeds the output plane");
  }
  out.reshape(PackKind::Input, {slice.nc, p.fh, p.fw, n_win}, nt);

  const Index plane = p.ih * p.iw;
  const Index reach = (p.fh - 1) * p.dil_h * p.iw + (p.fw - 1) * p.dil_w;
  const Index slice_origin = input_slice_origin(start, conv);
  std::vector<Index> base(static_cast<std::size_t>(n_win));

  float* dst = out.data.data();
  for (Index t = 0; t < nt; ++t) {
    const Index tile_start = start + t * n_win;
    const bool simple = tile_in_one_row(tile_start, n_win, conv);
    const Index tile_origin = input_slice_origin(tile_start, conv);
    for (Index w = 0; w < n_win; ++w) {
      const Index at = simple
                           ? tile_origin + input_pack_index_simple(0, 0, w, p, p.iw)
                           : slice_origin + input_pack_index_general(
                                                slice.i_oout, slice.i_oin, w, 0, 0, t,
                                                slice.e_off, conv, n_win, p.iw);
      if (at < 0 || at + reach >= plane) throw Error("input pack index outside slice");
      base[static_cast<std::size_t>(w)] = at;
    }
    for (Index c = 0; c < slice.nc; ++c) {
      const float* src = input.plane(slice.batch, slice.ic_start + c);
      for (Index kh = 0; kh < p.fh; ++kh) {
        for (Index kw = 0; kw < p.fw; ++kw) {
          const Index shift = kh * p.dil_h * p.iw + kw * p.dil_w;
          for (Index w = 0; w < n_win; ++w) dst[w] = src[base[static_cast<std::size_t>(w)] + shift];
          dst += n_win;
        }
      }
    }
  }
}

PackedTile pack_input(const Tensor4D& input, const ConvInfo& conv, const KernelRegion& region,
                      Index i_oout, Index i_oin, const CsaStrategy& strategy, const MkInfo& mk,
                      Index nt) {
  PackedTile out;
  pack_input(input, conv,
             InputSlice{0, region.ic_start, std::min(strategy.nc, region.ic_len), region.e_off,
                        i_oout, i_oin},
             mk, nt, out);
  return out;
}

void dump_packed(std::ostream& os, const PackedTile& tile) {
  const auto& s = tile.logical_shape;
  os << "# " << (tile.kind == PackKind::Filter ? "filter" : "input") << " nt=" << tile.nt
     << " shape=" << s[0] << 'x' << s[1] << 'x' << s[2] << 'x' << s[3] << '\n';
  const auto flags = os.flags();
  os << std::setprecision(9);
  const Index k = tile.reduction();
  const Index width = tile.width();
  for (Index t = 0; t < tile.nt; ++t) {
    const float* m = tile.tile(t);
    for (Index r = 0; r < k; ++r) {
      for (Index c = 0; c < width; ++c) os << (c ? " " : "") << m[r * width + c];
      os << '\n';
    }
  }
  os.flags(flags);
}

}  // namespace sconv
