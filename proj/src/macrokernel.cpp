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

#include "sconv/macrokernel.hpp"

#include <algorithm>

namespace sconv {

namespace {

template <int NF, int NW>
void microkernel_fixed(const MicrokernelArgs& a) {
  float acc[NF][NW];
  for (int f = 0; f < NF; ++f) {
    for (int w = 0; w < NW; ++w) acc[f][w] = a.acc[f * a.acc_stride + w];
  }
  const float* in = a.in;
  const float* filt = a.filt;
  for (Index k = 0; k < a.k; ++k, in += a.in_stride, filt += a.f_stride) {
    for (int f = 0; f < NF; ++f) {
      const float fv = filt[f];
      for (int w = 0; w < NW; ++w) acc[f][w] += fv * in[w];
    }
  }
  for (int f = 0; f < NF; ++f) {
    for (int w = 0; w < NW; ++w) a.acc[f * a.acc_stride + w] = acc[f][w];
  }
}

void microkernel_generic(const MicrokernelArgs& a) {
  for (Index k = 0; k < a.k; ++k) {
    const float* in = a.in + k * a.in_stride;
    const float* filt = a.filt + k * a.f_stride;
    for (Index f = 0; f < a.n_f; ++f) {
      float* acc = a.acc + f * a.acc_stride;
      const float fv = filt[f];
      for (Index w = 0; w < a.n_win; ++w) acc[w] += fv * in[w];
    }
  }
}

// Adds an n_f x n_win accumulator block into the output at (oc0, window0).
void write_back(Tensor4D& output, Index batch, Index oc0, Index window0, const MkInfo& mk,
                const std::vector<float>& acc) {
  for (Index f = 0; f < mk.n_f; ++f) {
    float* dst = output.plane(batch, oc0 + f) + window0;
    const float* src = acc.data() + f * mk.n_win;
    for (Index w = 0; w < mk.n_win; ++w) dst[w] += src[w];
  }
}

class RegionRunner {
 public:
  RegionRunner(const Tensor4D& input, const Tensor4D& filters, Tensor4D& output,
               const ConvInfo& conv, const KernelRegion& region, const MkInfo& mk,
               const ExecContext& ctx)
      : input_(input), filters_(filters), output_(output), conv_(conv), region_(region),
        mk_(mk), ctx_(ctx), acc_(static_cast<std::size_t>(mk.n_f * mk.n_win)) {}

  void run(const LoopNestPlan& plan) {
    const auto& p = conv_.params;
    const Index window_tiles = region_.spatial_len / mk_.n_win;
    const Index filter_tiles = region_.oc_len / mk_.n_f;
    const Index ic_end = region_.ic_start + region_.ic_len;

    // Sized once per region for the largest channel block.
    const Index k_max = std::min(plan.nc, region_.ic_len) * p.fh * p.fw;
    const bool is = plan.schedule == Schedule::InputStationary;
    input_pack_.data.reserve(
        static_cast<std::size_t>(k_max * mk_.n_win * (is ? 1 : plan.window_set)));
    filter_pack_.data.reserve(
        static_cast<std::size_t>(k_max * mk_.n_f * (is ? plan.filter_set : 1)));

    for (Index b = 0; b < p.n; ++b) {
      for (Index c0 = region_.ic_start; c0 < ic_end; c0 += plan.nc) {
        const Index nc = std::min(plan.nc, ic_end - c0);
        const Index k = nc * p.fh * p.fw;
        if (is) {
          input_stationary(b, c0, nc, k, window_tiles, filter_tiles, plan);
        } else {
          weight_stationary(b, c0, nc, k, window_tiles, filter_tiles, plan);
        }
      }
    }
  }

 private:
  void input_stationary(Index b, Index c0, Index nc, Index k, Index window_tiles,
                        Index filter_tiles, const LoopNestPlan& plan) {
    for (Index ws = 0; ws < window_tiles; ws += plan.window_set) {
      const Index w_count = std::min(plan.window_set, window_tiles - ws);
      for (Index fs = 0; fs < filter_tiles; fs += plan.filter_set) {
        const Index f_count = std::min(plan.filter_set, filter_tiles - fs);
        pack_filters(FilterSlice{region_.oc_start + fs * mk_.n_f, c0, nc}, f_count);
        for (Index wt = ws; wt < ws + w_count; ++wt) {
          pack_inputs(InputSlice{b, c0, nc, region_.e_off, ws * mk_.n_win, (wt - ws) * mk_.n_win},
                      1);
          for (Index ft = 0; ft < f_count; ++ft) {
            tile(b, k, input_pack_.tile(0), filter_pack_.tile(ft),
                 region_.oc_start + (fs + ft) * mk_.n_f,
                 region_.spatial_start + wt * mk_.n_win);
          }
        }
      }
    }
  }

  void weight_stationary(Index b, Index c0, Index nc, Index k, Index window_tiles,
                         Index filter_tiles, const LoopNestPlan& plan) {
    for (Index fs = 0; fs < filter_tiles; fs += plan.filter_set) {
      const Index f_count = std::min(plan.filter_set, filter_tiles - fs);
      for (Index ws = 0; ws < window_tiles; ws += plan.window_set) {
        const Index w_count = std::min(plan.window_set, window_tiles - ws);
        pack_inputs(InputSlice{b, c0, nc, region_.e_off, ws * mk_.n_win, 0}, w_count);
        for (Index ft = fs; ft < fs + f_count; ++ft) {
          pack_filters(FilterSlice{region_.oc_start + ft * mk_.n_f, c0, nc}, 1);
          for (Index wt = 0; wt < w_count; ++wt) {
            tile(b, k, input_pack_.tile(wt), filter_pack_.tile(0),
                 region_.oc_start + ft * mk_.n_f,
                 region_.spatial_start + (ws + wt) * mk_.n_win);
          }
        }
      }
    }
  }

  void pack_filters(const FilterSlice& slice, Index nt) {
    pack_filter(filters_, slice, mk_, nt, filter_pack_);
    if (ctx_.counters) {
      ctx_.counters->filter_pack_calls += 1;
      ctx_.counters->filter_tiles_packed += nt;
    }
  }

  void pack_inputs(const InputSlice& slice, Index nt) {
    pack_input(input_, conv_, slice, mk_, nt, input_pack_);
    if (ctx_.counters) {
      ctx_.counters->input_pack_calls += 1;
      ctx_.counters->input_tiles_packed += nt;
    }
  }

  void tile(Index b, Index k, const float* in, const float* filt, Index oc0, Index window0) {
    std::fill(acc_.begin(), acc_.end(), 0.0f);
    const MicrokernelArgs args{in,          filt,      acc_.data(), k,         mk_.n_win,
                               mk_.n_f,     mk_.n_win, mk_.n_f,     mk_.n_win};
    if (ctx_.microkernel) {
      ctx_.microkernel(args);
    } else {
      microkernel(args);
    }
    write_back(output_, b, oc0, window0, mk_, acc_);
    if (ctx_.counters) {
      ctx_.counters->microkernel_calls += 1;
      ctx_.counters->acc_writebacks += 1;
    }
  }

  const Tensor4D& input_;
  const Tensor4D& filters_;
  Tensor4D& output_;
  const ConvInfo& conv_;
  const KernelRegion& region_;
  const MkInfo& mk_;
  const ExecContext& ctx_;
  PackedTile input_pack_;
  PackedTile filter_pack_;
  std::vector<float> acc_;
};

}  // namespace

std::string_view to_string(LoopDim d) {
  switch (d) {
    case LoopDim::Batch: return "batch";
    case LoopDim::Channel: return "channel";
    case LoopDim::WindowSet: return "window_set";
    case LoopDim::FilterSet: return "filter_set";
    case LoopDim::WindowTile: return "window_tile";
    case LoopDim::FilterTile: return "filter_tile";
  }
  return "?";
}

ExecCounters& ExecCounters::operator+=(const ExecCounters& o) {
  input_tiles_packed += o.input_tiles_packed;
  filter_tiles_packed += o.filter_tiles_packed;
  input_pack_calls += o.input_pack_calls;
  filter_pack_calls += o.filter_pack_calls;
  microkernel_calls += o.microkernel_calls;
  acc_writebacks += o.acc_writebacks;
  naive_regions += o.naive_regions;
  return *this;
}

LoopNestPlan build_plan(const KernelRegion& region, const CsaStrategy& strategy, const MkInfo& mk,
                        Index batch) {
  if (region.kind != RegionKind::Main) throw Error("build_plan needs a Main region");
  LoopNestPlan plan;
  plan.schedule = strategy.schedule;
  plan.nc = std::min(strategy.nc, region.ic_len);
  plan.window_set = std::min(strategy.k3, region.spatial_len / mk.n_win);
  plan.filter_set = std::min(strategy.k2, region.oc_len / mk.n_f);

  const LoopDesc batch_loop{LoopDim::Batch, batch, 1};
  const LoopDesc channel_loop{LoopDim::Channel, region.ic_len, plan.nc};
  const LoopDesc window_sets{LoopDim::WindowSet, region.spatial_len, plan.window_set * mk.n_win};
  const LoopDesc filter_sets{LoopDim::FilterSet, region.oc_len, plan.filter_set * mk.n_f};
  const LoopDesc window_tiles{LoopDim::WindowTile, plan.window_set * mk.n_win, mk.n_win};
  const LoopDesc filter_tiles{LoopDim::FilterTile, plan.filter_set * mk.n_f, mk.n_f};

  if (strategy.schedule == Schedule::InputStationary) {
    plan.loops = {batch_loop, channel_loop, window_sets, filter_sets, window_tiles, filter_tiles};
    plan.stationary = PackKind::Input;
    plan.pack_level = LoopDim::WindowTile;
    plan.multipack_level = LoopDim::FilterSet;
    plan.multipack_tiles = plan.filter_set;
  } else {
    plan.loops = {batch_loop, channel_loop, filter_sets, window_sets, filter_tiles, window_tiles};
    plan.stationary = PackKind::Filter;
    plan.pack_level = LoopDim::FilterTile;
    plan.multipack_level = LoopDim::WindowSet;
    plan.multipack_tiles = plan.window_set;
  }
  return plan;
}

void microkernel(const MicrokernelArgs& a) {
  const bool dense = a.in_stride == a.n_win && a.f_stride == a.n_f && a.acc_stride == a.n_win;
  if (dense) {
    if (a.n_f == 8 && a.n_win == 16) return microkernel_fixed<8, 16>(a);
    if (a.n_f == 8 && a.n_win == 8) return microkernel_fixed<8, 8>(a);
    if (a.n_f == 4 && a.n_win == 16) return microkernel_fixed<4, 16>(a);
    if (a.n_f == 4 && a.n_win == 8) return microkernel_fixed<4, 8>(a);
    if (a.n_f == 16 && a.n_win == 16) return microkernel_fixed<16, 16>(a);
  }
  microkernel_generic(a);
}

void microkernel(std::span<const float> packed_in, std::span<const float> packed_f,
                 std::span<float> acc, Index k, Index n_win, Index n_f) {
  if (k < 0 || n_win < 1 || n_f < 1 || static_cast<Index>(packed_in.size()) != k * n_win ||
      static_cast<Index>(packed_f.size()) != k * n_f ||
      static_cast<Index>(acc.size()) != n_f * n_win) {
    throw Error("microkernel shape mismatch");
  }
  microkernel(MicrokernelArgs{packed_in.data(), packed_f.data(), acc.data(), k, n_win, n_f,
                              n_win, n_f, n_win});
}

void execute_region(const Tensor4D& input, const Tensor4D& filters, Tensor4D& output,
                    const ConvInfo& conv, const KernelRegion& region, const CsaStrategy& strategy,
                    const MkInfo& mk, const ExecContext& ctx) {
  if (region.kind == RegionKind::Remainder) {
    naive_fallback_region(input, filters, output, conv, region);
    if (ctx.counters) ctx.counters->naive_regions += 1;
    return;
  }
  const auto plan = build_plan(region, strategy, mk, conv.params.n);
  RegionRunner(input, filters, output, conv, region, mk, ctx).run(plan);
}

void naive_fallback_region(const Tensor4D& input, const Tensor4D& filters, Tensor4D& output,
                           const ConvInfo& conv, const KernelRegion& region) {
  const auto& p = conv.params;
  for (Index b = 0; b < p.n; ++b) {
    for (Index o = region.oc_start; o < region.oc_start + region.oc_len; ++o) {
      float* out = output.plane(b, o);
      for (Index s = region.spatial_start; s < region.spatial_start + region.spatial_len; ++s) {
        const auto [oy, ox] = delinearize(s, conv.ow);
        double sum = 0.0;
        for (Index c = region.ic_start; c < region.ic_start + region.ic_len; ++c) {
          const float* in = input.plane(b, c);
          for (Index kh = 0; kh < p.fh; ++kh) {
            const Index y = oy * p.stride_h + kh * p.dil_h;
            for (Index kw = 0; kw < p.fw; ++kw) {
              const Index x = ox * p.stride_w + kw * p.dil_w;
              sum += static_cast<double>(filters.at(o, c, kh, kw)) * in[y * p.iw + x];
            }
          }
        }
        out[s] += static_cast<float>(sum);
      }
    }
  }
}

SlicedPlan make_plan(const ConvParams& params, const ArchInfo& arch, const MkInfo& mk) {
  SlicedPlan plan;
  plan.conv = make_conv_info(params.padded());
  plan.strategy = analyze(plan.conv, arch, mk);
  plan.regions = plan_regions(plan.conv, plan.strategy, mk);
  return plan;
}

Tensor4D run_plan(const SlicedPlan& plan, const Tensor4D& input, const Tensor4D& filters,
                  const ConvParams& params, const MkInfo& mk, const ExecContext& ctx) {
  if (input.dims() != params.input_dims() || filters.dims() != params.filter_dims()) {
    throw Error("tensor shapes do not match the convolution");
  }
  const Tensor4D padded = pad_input(input, params);
  Tensor4D output(params.output_dims());
  for (const auto& region : plan.regions) {
    execute_region(padded, filters, output, plan.conv, region, plan.strategy, mk, ctx);
  }
  return output;
}

Tensor4D sliced_conv(const Tensor4D& input, const Tensor4D& filters, const ConvParams& params,
                     const ArchInfo& arch, const MkInfo& mk, const ExecContext& ctx) {
  return run_plan(make_plan(params, arch, mk), input, filters, params, mk, ctx);
}

}  // namespace sconv
