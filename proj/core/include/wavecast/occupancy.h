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

#ifndef WAVECAST_OCCUPANCY_H_
#define WAVECAST_OCCUPANCY_H_

#include <cstdint>
#include <string_view>

#include "wavecast/hwspec.h"

namespace wavecast {

struct KernelLaunchConfig {
  std::int64_t block_count = 1;  // B, thread blocks in the grid
  int threads_per_block = 1;
  int registers_per_thread = 0;
  int shared_mem_per_block = 0;  // bytes, static + dynamic

  bool operator==(const KernelLaunchConfig&) const = default;
};

// Throws InputError if the config violates its own invariants
// (block_count >= 1, 1 <= threads_per_block <= 1024, non-negative resources).
void Validate(const KernelLaunchConfig& config);

enum class OccupancyLimiter { kThreads, kRegisters, kSharedMemory, kBlocks };

std::string_view ToString(OccupancyLimiter limiter);

struct Occupancy {
  int blocks_per_sm = 0;
  OccupancyLimiter limiter = OccupancyLimiter::kBlocks;
  int warps_per_block = 0;
};

// Resident thread blocks per SM: the minimum of the block-slot, warp,
// register and shared-memory limits. A zero register or shared-memory demand
// disables that limit. Throws InfeasibleLaunchError when one block alone
// exceeds a per-SM resource.
Occupancy ComputeOccupancy(const KernelLaunchConfig& config,
                           const GpuSpec& spec);

int BlocksPerSm(const KernelLaunchConfig& config, const GpuSpec& spec);

// W = blocks_per_sm * sm_count.
std::int64_t WaveSize(const KernelLaunchConfig& config, const GpuSpec& spec);

}  // namespace wavecast

#endif  // WAVECAST_OCCUPANCY_H_
