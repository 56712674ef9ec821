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

#include "wavecast/wavescale.h"

#include <cmath>
#include <string>

#include "wavecast/error.h"

namespace wavecast {
namespace {

void CheckInputs(const KernelRecord& kernel, double gamma) {
  if (!(kernel.measured_time > 0) || !std::isfinite(kernel.measured_time)) {
    throw InputError("kernel '" + kernel.name +
                     "' has non-positive measured time");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InputError("gamma must lie in [0, 1], got " + std::to_string(gamma));
  }
}

}  // namespace

double ScaleKernelExact(const KernelRecord& kernel, const GpuSpec& origin,
                        const GpuSpec& dest, double gamma) {
  CheckInputs(kernel, gamma);
  const double w_o = static_cast<double>(WaveSize(kernel.launch, origin));
  const double w_d = static_cast<double>(WaveSize(kernel.launch, dest));
  const double blocks = static_cast<double>(kernel.launch.block_count);

  const double waves_o = std::ceil(blocks / w_o);
  const double waves_d = std::ceil(blocks / w_d);
  const double bandwidth_term =
      std::pow(origin.mem_bandwidth / dest.mem_bandwidth * (w_d / w_o), gamma);
  const double clock_term = std::pow(origin.clock / dest.clock, 1.0 - gamma);
  return (waves_d / waves_o) * bandwidth_term * clock_term *
         kernel.measured_time;
}

double ScaleKernel(const KernelRecord& kernel, const GpuSpec& origin,
                   const GpuSpec& dest, double gamma) {
  CheckInputs(kernel, gamma);
  const double w_o = static_cast<double>(WaveSize(kernel.launch, origin));
  const double w_d = static_cast<double>(WaveSize(kernel.launch, dest));

  const double bandwidth_term =
      std::pow(origin.mem_bandwidth / dest.mem_bandwidth, gamma);
  const double wave_term = std::pow(w_o / w_d, 1.0 - gamma);
  const double clock_term = std::pow(origin.clock / dest.clock, 1.0 - gamma);
  return bandwidth_term * wave_term * clock_term * kernel.measured_time;
}

double ScaleKernel(const KernelRecord& kernel, const GpuSpec& origin,
                   const GpuSpec& dest, double gamma,
                   ScalingEquation equation) {
  return equation == ScalingEquation::kExact
             ? ScaleKernelExact(kernel, origin, dest, gamma)
             : ScaleKernel(kernel, origin, dest, gamma);
}

double ScaleOperation(std::span<const KernelRecord> kernels,
                      std::span<const double> gammas, const GpuSpec& origin,
                      const GpuSpec& dest, ScalingEquation equation) {
  if (kernels.empty()) {
    throw InputError("cannot scale an operation with no kernels");
  }
  if (gammas.size() != kernels.size()) {
    throw InternalError("ScaleOperation: one gamma per kernel required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    try {
      total += ScaleKernel(kernels[i], origin, dest, gammas[i], equation);
    } catch (const InfeasibleLaunchError& e) {
      throw InfeasibleLaunchError("kernel " + std::to_string(i) + " ('" +
                                  kernels[i].name + "'): " + e.what());
    } catch (const InputError& e) {
      throw InputError("kernel " + std::to_string(i) + " ('" +
                       kernels[i].name + "'): " + e.what());
    }
  }
  return total;
}

}  // namespace wavecast
