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

#include <benchmark/benchmark.h>

#include <vector>

#include "wavecast/hwspec.h"
#include "wavecast/wavescale.h"

namespace wavecast {
namespace {

std::vector<KernelRecord> Kernels(int n) {
  std::vector<KernelRecord> out;
  for (int i = 0; i < n; ++i) {
    KernelRecord k;
    k.name = "k";
    k.launch = {1000 + 37 * i, 32 * (1 + i % 32), 16 + i % 48, 1024 * (i % 16)};
    k.measured_time = 1e-5 * (1 + i % 100);
    out.push_back(k);
  }
  return out;
}

template <ScalingEquation kEquation>
void BM_ScaleOperation(benchmark::State& state) {
  const GpuRegistry registry = LoadRegistryFile(BundledRegistryPath());
  const std::vector<KernelRecord> kernels = Kernels(static_cast<int>(state.range(0)));
  const std::vector<double> gammas(kernels.size(), 0.6);
  const GpuSpec& o = registry.At("P100");
  const GpuSpec& d = registry.At("T4");
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScaleOperation(kernels, gammas, o, d, kEquation));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScaleOperation<ScalingEquation::kSimplified>)->Arg(1)->Arg(64)->Arg(1024);
BENCHMARK(BM_ScaleOperation<ScalingEquation::kExact>)->Arg(1)->Arg(64)->Arg(1024);

}  // namespace
}  // namespace wavecast
