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

#ifndef WAVECAST_METRICS_CACHE_H_
#define WAVECAST_METRICS_CACHE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "wavecast/roofline.h"
#include "wavecast/trace.h"

namespace wavecast {

// Measured kernel metrics keyed by kernel name and launch shape (block count,
// block size). Lookups are exact-match on the whole key.
class MetricsCache {
 public:
  // Overwrites any existing entry for `key`.
  void Insert(const KernelKey& key, const KernelMetrics& metrics);

  std::optional<KernelMetrics> Lookup(const KernelKey& key) const;
  std::optional<KernelMetrics> Lookup(const KernelRecord& kernel) const;

  // Entries from `other` replace entries with the same key.
  void MergeFrom(const MetricsCache& other);
  // Adds every kernel of `trace` that carries metrics, replacing existing
  // entries (trace-attached metrics win).
  void MergeFrom(const IterationTrace& trace);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<KernelKey, KernelMetrics>& entries() const { return entries_; }

  bool operator==(const MetricsCache&) const = default;

 private:
  std::map<KernelKey, KernelMetrics> entries_;
};

// Sidecar file: a JSON list of {"kernel_key": {name, block_count,
// threads_per_block}, "metrics": {flops, dram_bytes}} records.
MetricsCache ParseMetricsCache(std::string_view document,
                               std::string_view source = "<cache>");
MetricsCache LoadMetricsCacheFile(const std::filesystem::path& path);
std::string SerializeMetricsCache(const MetricsCache& cache);

}  // namespace wavecast

#endif  // WAVECAST_METRICS_CACHE_H_
