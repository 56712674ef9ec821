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

#ifndef WAVECAST_TRACE_H_
#define WAVECAST_TRACE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wavecast/hwspec.h"
#include "wavecast/wavescale.h"

namespace wavecast {

inline constexpr int kTraceSchemaVersion = 1;

// One DNN operation of a training iteration. `kernels` covers the forward
// and backward passes together.
struct OperationRecord {
  std::string op_name;
  std::map<std::string, double> op_params;  // flags are stored as 0 / 1
  double forward_time = 0;                  // seconds
  std::optional<double> backward_time;      // seconds
  std::vector<KernelRecord> kernels;

  // forward_time + backward_time (0 when absent).
  double MeasuredTime() const;
  bool operator==(const OperationRecord&) const = default;
};

struct IterationTrace {
  int schema_version = kTraceSchemaVersion;
  std::string origin_gpu;
  std::string model_name;
  int batch_size = 1;
  std::vector<OperationRecord> operations;

  // Sum of MeasuredTime() over operations, in trace order.
  double MeasuredIterationTime() const;
  bool operator==(const IterationTrace&) const = default;
};

struct TraceValidationOptions {
  // Kernel times may exceed the operation's wall time by this fraction.
  double kernel_time_slack = 0.10;
};

// Checks every invariant and reports all violations together in one
// InputError, each prefixed with its operation index.
void ValidateTrace(const IterationTrace& trace, const GpuRegistry& registry,
                   const TraceValidationOptions& options = {});

// Parses the JSON trace format (times in milliseconds) and validates it.
IterationTrace ParseTrace(std::string_view document, const GpuRegistry& registry,
                          const TraceValidationOptions& options = {});
IterationTrace LoadTraceFile(const std::filesystem::path& path,
                             const GpuRegistry& registry,
                             const TraceValidationOptions& options = {});

std::string SerializeTrace(const IterationTrace& trace);
void SaveTraceFile(const IterationTrace& trace,
                   const std::filesystem::path& path);

struct KernelKey {
  std::string name;
  std::int64_t block_count = 0;
  int threads_per_block = 0;

  auto operator<=>(const KernelKey&) const = default;
};

KernelKey KeyOf(const KernelRecord& kernel);

// Kernels whose measured time is at or above the `percentile`-th percentile
// of all kernel times in the trace. The threshold is the
// (floor(p * n / 100) + 1)-th smallest time, so p = 0 keeps every kernel and
// ties at the threshold are kept.
std::vector<KernelKey> SignificantKernels(const IterationTrace& trace,
                                          double percentile = 99.5);

}  // namespace wavecast

#endif  // WAVECAST_TRACE_H_
