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

#ifndef WAVECAST_SYNTHESIZE_H_
#define WAVECAST_SYNTHESIZE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wavecast/hwspec.h"
#include "wavecast/occupancy.h"
#include "wavecast/trace.h"

namespace wavecast {

enum class Pass { kForward, kBackward };

struct KernelTemplate {
  std::string name;
  KernelLaunchConfig launch;
  double flops = 0;
  double dram_bytes = 0;
  Pass pass = Pass::kForward;
};

// An operation of a workload. conv2d, lstm, bmm and linear are timed from
// `op_params` and get generated kernels; every other op is timed from its
// listed kernels.
struct OpTemplate {
  std::string op_name;
  std::map<std::string, double> op_params;
  std::vector<KernelTemplate> kernels;
};

struct WorkloadTemplate {
  std::string model_name;
  int batch_size = 1;
  std::vector<OpTemplate> operations;
};

struct SynthesisOptions {
  // Relative log-normal jitter on each kernel time. Zero gives the oracle
  // times exactly.
  double noise = 0.0;
  bool attach_metrics = true;
};

// Kernel times are rounded to this grid so that sums of kernel times, and
// their millisecond encodings, are exact.
inline constexpr int kTimeGridExponent = -30;
double QuantizeTime(double seconds);

// Builds a trace for `origin` from the analytic oracle. Deterministic in
// (workload, origin, seed, options). Throws InputError for an empty
// workload or an operation that is neither kernel-varying nor has kernels.
IterationTrace SynthesizeTrace(const WorkloadTemplate& workload,
                               const GpuSpec& origin, std::uint64_t seed,
                               const SynthesisOptions& options = {});

// Built-in workloads.
WorkloadTemplate ResnetLikeTemplate(int batch_size);
WorkloadTemplate TransformerLikeTemplate(int batch_size);
// Only kernel-alike operations.
WorkloadTemplate ElementwiseTemplate(int batch_size);
std::vector<std::string> BuiltinTemplateNames();
WorkloadTemplate BuiltinTemplate(std::string_view name, int batch_size);

// A kernel-alike elementwise kernel over `elements` values, one thread per
// element in 256-thread blocks.
KernelTemplate ElementwiseKernel(std::string name, double elements,
                                 double flops_per_element,
                                 double bytes_per_element,
                                 Pass pass = Pass::kForward);

// JSON workload description: {"model_name", "batch_size", "operations": [
// {"op_name", "op_params", "kernels": [{"name", "block_count",
// "threads_per_block", "registers_per_thread", "shared_mem_bytes", "flops",
// "dram_bytes", "pass": "forward" | "backward"}]}]}.
WorkloadTemplate ParseWorkloadTemplate(std::string_view document,
                                       std::string_view source = "<template>");
WorkloadTemplate LoadWorkloadTemplateFile(const std::filesystem::path& path);

}  // namespace wavecast

#endif  // WAVECAST_SYNTHESIZE_H_
