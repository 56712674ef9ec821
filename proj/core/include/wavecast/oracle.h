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

#ifndef WAVECAST_ORACLE_H_
#define WAVECAST_ORACLE_H_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wavecast/hwspec.h"
#include "wavecast/occupancy.h"

namespace wavecast {

// Operations whose kernels differ from GPU to GPU and that are therefore
// predicted by a learned regressor instead of wave scaling.
enum class OpKind { kConv2d, kLstm, kBmm, kLinear };

std::string_view ToString(OpKind op);
// Throws InputError for anything but conv2d, lstm, bmm, linear.
OpKind ParseOpKind(std::string_view name);
const std::vector<OpKind>& AllOpKinds();

// Operation parameters fed to the regressor, in column order.
//   conv2d: batch in_channels out_channels kernel_size padding stride
//           image_size
//   lstm:   batch input_size hidden_size seq_len num_layers bidirectional bias
//   bmm:    batch left middle right
//   linear: batch in_features out_features bias
const std::vector<std::string>& OpFeatureNames(OpKind op);

// Hardware features appended to every sample: memory capacity (GiB),
// bandwidth (GB/s), SM count, peak GFLOP/s.
const std::vector<std::string>& GpuFeatureNames();
std::vector<double> GpuFeatures(const GpuSpec& spec);

struct WorkEstimate {
  double flops = 0;      // forward + backward
  double dram_bytes = 0;
  int kernel_launches = 0;
  double memory_footprint = 0;  // bytes: parameters and activations with
                                // their gradients
};

// Closed-form FP32 work estimate of one forward + backward pass. The
// backward pass is costed as twice the forward pass (input and weight
// gradients). Throws InputError when the parameters do not describe a valid
// operation (e.g. a convolution kernel larger than the padded image).
WorkEstimate EstimateWork(OpKind op, std::span<const double> params);

// Time model used as synthetic ground truth:
//   t = launches * kLaunchOverhead
//       + max(flops / (kComputeEfficiency * P), bytes / D)
inline constexpr double kLaunchOverhead = 5e-6;  // seconds
inline constexpr double kComputeEfficiency = 0.7;

double RooflineTime(double flops, double dram_bytes, int launches,
                    const GpuSpec& gpu);

// Analytic forward + backward time of an operation on `gpu`.
double AnalyticOpTime(OpKind op, std::span<const double> params,
                      const GpuSpec& gpu);

// Analytic time of a single kernel, including the tail effect of a partial
// last wave: the roofline time is stretched by ceil(B/W) * W / B.
double AnalyticKernelTime(double flops, double dram_bytes,
                          const KernelLaunchConfig& launch, const GpuSpec& gpu);

using CostOracle =
    std::function<double(OpKind, std::span<const double>, const GpuSpec&)>;

}  // namespace wavecast

#endif  // WAVECAST_ORACLE_H_
