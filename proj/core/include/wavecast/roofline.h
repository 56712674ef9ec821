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

#ifndef WAVECAST_ROOFLINE_H_
#define WAVECAST_ROOFLINE_H_

#include <string_view>

#include "wavecast/hwspec.h"

namespace wavecast {

// Measured counters for one kernel. The arithmetic intensity derived from
// them is a property of the kernel code, so it carries across GPUs.
struct KernelMetrics {
  double flop_count = 0;
  double dram_bytes = 0;  // read + written

  bool operator==(const KernelMetrics&) const = default;
};

// x = flop_count / dram_bytes. Throws InputError when dram_bytes is zero;
// callers treat that as missing metrics.
double ArithmeticIntensity(const KernelMetrics& metrics);

enum class GammaBranch { kLinear, kInverse };

std::string_view ToString(GammaBranch branch);

struct GammaSelection {
  double gamma = 1.0;
  double intensity = 0.0;
  double ridge_point = 0.0;
  GammaBranch branch = GammaBranch::kLinear;
};

// Memory-bandwidth boundedness against the destination GPU's ridge point R:
// falls linearly from 1 at x = 0 to 0.5 at x = R, then as 0.5 R / x.
double SelectGamma(double intensity, double ridge_point);
GammaSelection SelectGamma(double intensity, const GpuSpec& dest);

}  // namespace wavecast

#endif  // WAVECAST_ROOFLINE_H_
