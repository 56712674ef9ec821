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

#include "wavecast/roofline.h"

#include <cmath>

#include "wavecast/error.h"

namespace wavecast {

double ArithmeticIntensity(const KernelMetrics& metrics) {
  if (!(metrics.dram_bytes > 0)) {
    throw InputError("arithmetic intensity undefined: kernel reports zero "
                     "DRAM bytes");
  }
  if (metrics.flop_count < 0) {
    throw InputError("flop_count must be >= 0");
  }
  return metrics.flop_count / metrics.dram_bytes;
}

std::string_view ToString(GammaBranch branch) {
  return branch == GammaBranch::kLinear ? "linear" : "inverse";
}

double SelectGamma(double intensity, double ridge_point) {
  if (!(intensity >= 0) || !std::isfinite(intensity)) {
    throw InputError("arithmetic intensity must be finite and >= 0");
  }
  if (!(ridge_point > 0) || !std::isfinite(ridge_point)) {
    throw InputError("ridge point must be finite and > 0");
  }
  if (intensity < ridge_point) return (-0.5 / ridge_point) * intensity + 1.0;
  return 0.5 * ridge_point / intensity;
}

GammaSelection SelectGamma(double intensity, const GpuSpec& dest) {
  GammaSelection s;
  s.intensity = intensity;
  s.ridge_point = RidgePoint(dest);
  s.branch = intensity < s.ridge_point ? GammaBranch::kLinear
                                       : GammaBranch::kInverse;
  s.gamma = SelectGamma(intensity, s.ridge_point);
  return s;
}

}  // namespace wavecast
