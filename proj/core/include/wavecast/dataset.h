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

#ifndef WAVECAST_DATASET_H_
#define WAVECAST_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wavecast/hwspec.h"
#include "wavecast/oracle.h"

namespace wavecast {

struct Sample {
  std::int64_t config_id = 0;  // shared by the same configuration on all GPUs
  std::string gpu;
  std::vector<double> op_params;
  std::vector<double> gpu_features;  // see GpuFeatureNames()
  double target_time = 0;            // seconds, forward + backward

  std::vector<double> Features() const;
  bool operator==(const Sample&) const = default;
};

struct Dataset {
  OpKind op = OpKind::kConv2d;
  std::vector<Sample> samples;

  std::size_t FeatureCount() const;
  std::vector<std::string> ColumnNames() const;  // op + GPU feature names
  bool operator==(const Dataset&) const = default;
};

// Configurations whose memory footprint exceeds this are skipped as
// out-of-memory. Fixed (the smallest card in the bundled registry) so that the
// sampled configurations do not depend on which GPUs are timed.
inline constexpr double kDefaultMemoryBudget = 8.0 * 1024 * 1024 * 1024;

// Draws one configuration uniformly from the operation's parameter ranges,
// redrawing until the configuration is valid and fits `memory_budget`.
// Values are in OpFeatureNames() order.
std::vector<double> SampleConfiguration(
    OpKind op, std::mt19937_64& rng,
    double memory_budget = kDefaultMemoryBudget);

enum class GpuAssignment {
  kEveryGpu,   // each configuration is timed on every GPU
  kRoundRobin, // configuration i is timed on gpus[i % gpus.size()] only
};

// `config_count` configurations timed with `oracle`. The configurations
// depend only on `op` and `seed`.
Dataset GenerateDataset(OpKind op, int config_count, std::uint64_t seed,
                        std::span<const GpuSpec> gpus,
                        GpuAssignment assignment = GpuAssignment::kEveryGpu,
                        const CostOracle& oracle = AnalyticOpTime);

// CSV: header row `config_id,gpu,<op features>,<gpu features>,time_s`, one
// sample per line.
void WriteDatasetCsv(const Dataset& dataset, std::ostream& out);
void WriteDatasetCsv(const Dataset& dataset, const std::filesystem::path& path);
Dataset ReadDatasetCsv(std::istream& in, std::string_view source = "<dataset>");
Dataset ReadDatasetCsv(const std::filesystem::path& path);

}  // namespace wavecast

#endif  // WAVECAST_DATASET_H_
