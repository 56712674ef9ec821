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

#ifndef WAVECAST_WAVESCALE_H_
#define WAVECAST_WAVESCALE_H_

#include <optional>
#include <span>
#include <string>

#include "wavecast/hwspec.h"
#include "wavecast/occupancy.h"
#include "wavecast/roofline.h"

namespace wavecast {

struct KernelRecord {
  std::string name;
  KernelLaunchConfig launch;
  double measured_time = 0;  // seconds on the origin GPU
  std::optional<KernelMetrics> metrics;

  bool operator==(const KernelRecord&) const = default;
};

enum class ScalingEquation {
  kSimplified,  // wave counts replaced by B / W; the production default
  kExact,       // explicit ceil(B / W) wave counts
};

// Exact form:
//   T_d = ceil(B/W_d) (D_o/D_d * W_d/W_o)^g (C_o/C_d)^(1-g) / ceil(B/W_o) T_o
double ScaleKernelExact(const KernelRecord& kernel, const GpuSpec& origin,
                        const GpuSpec& dest, double gamma);

// Simplified form, valid when each kernel runs many waves:
//   T_d = (D_o/D_d)^g (W_o/W_d)^(1-g) (C_o/C_d)^(1-g) T_o
double ScaleKernel(const KernelRecord& kernel, const GpuSpec& origin,
                   const GpuSpec& dest, double gamma);

double ScaleKernel(const KernelRecord& kernel, const GpuSpec& origin,
                   const GpuSpec& dest, double gamma,
                   ScalingEquation equation);

// Sum of per-kernel predictions, accumulated left to right. `gammas` is
// parallel to `kernels`. Errors are rethrown with the kernel index.
double ScaleOperation(std::span<const KernelRecord> kernels,
                      std::span<const double> gammas, const GpuSpec& origin,
                      const GpuSpec& dest,
                      ScalingEquation equation = ScalingEquation::kSimplified);

}  // namespace wavecast

#endif  // WAVECAST_WAVESCALE_H_
