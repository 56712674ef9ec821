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

#ifndef WAVECAST_HWSPEC_H_
#define WAVECAST_HWSPEC_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wavecast {

// Inputs of the per-SM thread block occupancy calculation.
struct OccupancyLimits {
  int max_threads_per_sm = 2048;
  int max_blocks_per_sm = 32;
  int max_registers_per_sm = 65536;
  int max_shared_mem_per_sm = 98304;  // bytes
  int warp_size = 32;
  int max_warps_per_sm = 64;
  int register_alloc_granularity = 256;      // registers, per warp
  int shared_mem_alloc_granularity = 256;    // bytes, per block

  bool operator==(const OccupancyLimits&) const = default;
};

// Hardware characteristics of one GPU. All quantities are SI: bytes,
// bytes/second, hertz, FLOP/second. Registry files use human units.
struct GpuSpec {
  std::string name;
  std::string generation;
  double mem_capacity = 0;   // bytes
  double mem_bandwidth = 0;  // achieved bandwidth, bytes/s
  double clock = 0;          // sustained SM clock used by wave scaling, Hz
  int sm_count = 0;
  double peak_flops = 0;     // FLOP/s, manufacturer figure
  OccupancyLimits occupancy;
  std::optional<double> hourly_cost;  // currency/hour; absent if not rentable

  bool operator==(const GpuSpec&) const = default;
};

// Throws InputError naming the GPU and the offending field.
void Validate(const GpuSpec& spec);

// R = P / D in FLOP per byte.
double RidgePoint(const GpuSpec& spec);

// Immutable-after-load name -> spec map. Iteration order is the order the
// entries appeared in the source document.
class GpuRegistry {
 public:
  GpuRegistry() = default;

  // Validates and inserts; rejects duplicate names.
  void Add(GpuSpec spec);

  const GpuSpec* Find(std::string_view name) const;
  // Throws InputError listing the known names when `name` is absent.
  const GpuSpec& At(std::string_view name) const;

  std::vector<std::string> Names() const;
  const std::vector<GpuSpec>& specs() const { return specs_; }
  std::size_t size() const { return specs_.size(); }
  bool empty() const { return specs_.empty(); }

  bool operator==(const GpuRegistry& other) const {
    return specs_ == other.specs_;
  }

 private:
  std::vector<GpuSpec> specs_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Parses a YAML registry document: a mapping from GPU name to a table of
// fields whose names carry their units (mem_bandwidth_gb_s, clock_mhz, ...).
// Unknown fields are rejected. `source` labels error messages.
GpuRegistry LoadRegistry(std::string_view document,
                         std::string_view source = "<registry>");
GpuRegistry LoadRegistryFile(const std::filesystem::path& path);

std::string SerializeRegistry(const GpuRegistry& registry);

// Path of the registry shipped with the project (six GPUs).
std::filesystem::path BundledRegistryPath();

}  // namespace wavecast

#endif  // WAVECAST_HWSPEC_H_
