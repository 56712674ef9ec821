/* Copyright 2026 The Wavecast Authors. All Rights Reserved.

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

#include "wavecast/oracle.h"

#include <algorithm>
#include <cmath>

#include "wavecast/error.h"

namespace wavecast {
namespace {

constexpr double kBytesPerElement = 4.0;
// Forward, input-gradient and weight-gradient passes.
constexpr double kPasses = 3.0;

void ExpectArity(OpKind op, std::span<const double> params) {
  if (params.size() != OpFeatureNames(op).size()) {
    throw InputError(std::string(ToString(op)) + " expects " +
                     std::to_string(OpFeatureNames(op).size()) +
                     " parameters, got " + std::to_string(params.size()));
  }
  for (double p : params) {
    if (!std::isfinite(p) || p < 0) {
      throw InputError(std::string(ToString(op)) +
                       ": parameters must be finite and non-negative");
    }
  }
}

WorkEstimate Conv2d(std::span<const double> p) {
  const double batch = p[0], in_ch = p[1], out_ch = p[2], kernel = p[3],
               padding = p[4], stride = p[5], image = p[6];
  if (batch < 1 || in_ch < 1 || out_ch < 1 || kernel < 1 || stride < 1 ||
      image < 1) {
    throw InputError("conv2d: sizes must be >= 1");
  }
  if (kernel > image + 2 * padding) {
    throw InputError("conv2d: kernel larger than the padded image");
  }
  const double out_image = std::floor((image + 2 * padding - kernel) / stride) + 1;
  const double out_pixels = out_image * out_image;
  const double forward_flops =
      2.0 * batch * out_ch * out_pixels * in_ch * kernel * kernel;
  const double elements = batch * in_ch * image * image +
                          out_ch * in_ch * kernel * kernel +
                          batch * out_ch * out_pixels;
  return {kPasses * forward_flops, kPasses * kBytesPerElement * elements, 3,
          2.0 * kBytesPerElement * elements};
}

WorkEstimate Lstm(std::span<const double> p) {
  const double batch = p[0], input = p[1], hidden = p[2], seq = p[3],
               layers = p[4];
  const bool bidirectional = p[5] != 0, bias = p[6] != 0;
  if (batch < 1 || input < 1 || hidden < 1 || seq < 1 || layers < 1) {
    throw InputError("lstm: sizes must be >= 1");
  }
  const double dirs = bidirectional ? 2.0 : 1.0;
  double flops = 0, elements = 0;
  for (int layer = 0; layer < static_cast<int>(layers); ++layer) {
    const double layer_in = layer == 0 ? input : hidden * dirs;
    // Four gates: two GEMVs per step plus the pointwise cell update.
    double step = 2.0 * batch * 4.0 * hidden * (layer_in + hidden) +
                  10.0 * batch * hidden;
    if (bias) step += 2.0 * batch * 4.0 * hidden;
    flops += dirs * seq * step;
    elements += dirs * (4.0 * hidden * (layer_in + hidden) +
                        seq * batch * (layer_in + 6.0 * hidden));
  }
  const int launches = static_cast<int>(3.0 * layers * dirs * seq);
  return {kPasses * flops, kPasses * kBytesPerElement * elements, launches,
          2.0 * kBytesPerElement * elements};
}

WorkEstimate Bmm(std::span<const double> p) {
  const double n = p[0], l = p[1], m = p[2], r = p[3];
  if (n < 1 || l < 1 || m < 1 || r < 1) {
    throw InputError("bmm: sizes must be >= 1");
  }
  const double flops = 2.0 * n * l * m * r;
  const double elements = n * (l * m + m * r + l * r);
  return {kPasses * flops, kPasses * kBytesPerElement * elements, 3,
          2.0 * kBytesPerElement * elements};
}

WorkEstimate Linear(std::span<const double> p) {
  const double batch = p[0], in = p[1], out = p[2];
  const bool bias = p[3] != 0;
  if (batch < 1 || in < 1 || out < 1) {
    throw InputError("linear: sizes must be >= 1");
  }
  const double tensors = batch * in + in * out + batch * out + (bias ? out : 0);
  double flops = kPasses * 2.0 * batch * in * out;
  double traffic = kPasses * (batch * in + in * out + batch * out);
  int launches = 3;
  if (bias) {
    flops += 2.0 * batch * out;
    traffic += 2.0 * out + batch * out;
    launches += 1;
  }
  return {flops, kBytesPerElement * traffic, launches,
          2.0 * kBytesPerElement * tensors};
}

}  // namespace

std::string_view ToString(OpKind op) {
  switch (op) {
    case OpKind::kConv2d:
      return "conv2d";
    case OpKind::kLstm:
      return "lstm";
    case OpKind::kBmm:
      return "bmm";
    case OpKind::kLinear:
      return "linear";
  }
  return "unknown";
}

OpKind ParseOpKind(std::string_view name) {
  for (OpKind op : AllOpKinds()) {
    if (ToString(op) == name) return op;
  }
  throw InputError("unknown operation '" + std::string(name) +
                   "'; expected one of conv2d, lstm, bmm, linear");
}

const std::vector<OpKind>& AllOpKinds() {
  static const std::vector<OpKind> kAll = {OpKind::kConv2d, OpKind::kLstm,
                                           OpKind::kBmm, OpKind::kLinear};
  return kAll;
}

const std::vector<std::string>& OpFeatureNames(OpKind op) {
  static const std::vector<std::string> kConv2d = {
      "batch",   "in_channels", "out_channels", "kernel_size",
      "padding", "stride",      "image_size"};
  static const std::vector<std::string> kLstm = {
      "batch",      "input_size",    "hidden_size", "seq_len",
      "num_layers", "bidirectional", "bias"};
  static const std::vector<std::string> kBmm = {"batch", "left", "middle",
                                                "right"};
  static const std::vector<std::string> kLinear = {"batch", "in_features",
                                                   "out_features", "bias"};
  switch (op) {
    case OpKind::kConv2d:
      return kConv2d;
    case OpKind::kLstm:
      return kLstm;
    case OpKind::kBmm:
      return kBmm;
    case OpKind::kLinear:
      return kLinear;
  }
  throw InternalError("unhandled OpKind");
}

const std::vector<std::string>& GpuFeatureNames() {
  static const std::vector<std::string> kNames = {
      "mem_capacity_gib", "mem_bandwidth_gb_s", "sm_count", "peak_gflops"};
  return kNames;
}

std::vector<double> GpuFeatures(const GpuSpec& spec) {
  return {spec.mem_capacity / (1024.0 * 1024.0 * 1024.0),
          spec.mem_bandwidth / 1e9, static_cast<double>(spec.sm_count),
          spec.peak_flops / 1e9};
}

WorkEstimate EstimateWork(OpKind op, std::span<const double> params) {
  ExpectArity(op, params);
  switch (op) {
    case OpKind::kConv2d:
      return Conv2d(params);
    case OpKind::kLstm:
      return Lstm(params);
    case OpKind::kBmm:
      return Bmm(params);
    case OpKind::kLinear:
      return Linear(params);
  }
  throw InternalError("unhandled OpKind");
}

double RooflineTime(double flops, double dram_bytes, int launches,
                    const GpuSpec& gpu) {
  const double compute = flops / (kComputeEfficiency * gpu.peak_flops);
  const double memory = dram_bytes / gpu.mem_bandwidth;
  return launches * kLaunchOverhead + std::max(compute, memory);
}

double AnalyticOpTime(OpKind op, std::span<const double> params,
                      const GpuSpec& gpu) {
  const WorkEstimate w = EstimateWork(op, params);
  return RooflineTime(w.flops, w.dram_bytes, w.kernel_launches, gpu);
}

double AnalyticKernelTime(double flops, double dram_bytes,
                          const KernelLaunchConfig& launch,
                          const GpuSpec& gpu) {
  const double wave = static_cast<double>(WaveSize(launch, gpu));
  const double blocks = static_cast<double>(launch.block_count);
  const double tail = std::ceil(blocks / wave) * wave / blocks;
  const double compute = flops / (kComputeEfficiency * gpu.peak_flops);
  const double memory = dram_bytes / gpu.mem_bandwidth;
  return kLaunchOverhead + tail * std::max(compute, memory);
}

}  // namespace wavecast
