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

#include "wavecast/occupancy.h"

#include <limits>
#include <string>

#include "wavecast/error.h"

namespace wavecast {
namespace {

constexpr int kMaxThreadsPerBlock = 1024;

std::int64_t CeilDiv(std::int64_t top, std::int64_t bottom) {
  return (top + bottom - 1) / bottom;
}

std::int64_t RoundUp(std::int64_t value, std::int64_t granularity) {
  return CeilDiv(value, granularity) * granularity;
}

[[noreturn]] void Infeasible(const GpuSpec& spec, const std::string& what) {
  throw InfeasibleLaunchError("launch infeasible on GPU '" + spec.name +
                              "': " + what);
}

}  // namespace

void Validate(const KernelLaunchConfig& config) {
  if (config.block_count < 1) {
    throw InputError("block_count must be >= 1, got " +
                     std::to_string(config.block_count));
  }
  if (config.threads_per_block < 1 ||
      config.threads_per_block > kMaxThreadsPerBlock) {
    throw InputError("threads_per_block must be in [1, 1024], got " +
                     std::to_string(config.threads_per_block));
  }
  if (config.registers_per_thread < 0) {
    throw InputError("registers_per_thread must be >= 0");
  }
  if (config.shared_mem_per_block < 0) {
    throw InputError("shared_mem_per_block must be >= 0");
  }
}

std::string_view ToString(OccupancyLimiter limiter) {
  switch (limiter) {
    case OccupancyLimiter::kThreads:
      return "threads";
    case OccupancyLimiter::kRegisters:
      return "registers";
    case OccupancyLimiter::kSharedMemory:
      return "shared_memory";
    case OccupancyLimiter::kBlocks:
      return "blocks";
  }
  return "unknown";
}

Occupancy ComputeOccupancy(const KernelLaunchConfig& config,
                           const GpuSpec& spec) {
  Validate(config);
  const OccupancyLimits& lim = spec.occupancy;

  if (config.threads_per_block > lim.max_threads_per_sm) {
    Infeasible(spec, std::to_string(config.threads_per_block) +
                         " threads per block exceeds " +
                         std::to_string(lim.max_threads_per_sm) +
                         " threads per SM");
  }
  if (config.shared_mem_per_block > lim.max_shared_mem_per_sm) {
    Infeasible(spec, std::to_string(config.shared_mem_per_block) +
                         " bytes of shared memory per block exceeds " +
                         std::to_string(lim.max_shared_mem_per_sm) +
                         " bytes per SM");
  }

  const std::int64_t warps_per_block =
      CeilDiv(config.threads_per_block, lim.warp_size);
  constexpr std::int64_t kUnbounded = std::numeric_limits<int>::max();

  // Tie order: threads, registers, shared memory, then the block-slot limit.
  std::int64_t by_warps = lim.max_warps_per_sm / warps_per_block;

  std::int64_t by_registers = kUnbounded;
  if (config.registers_per_thread > 0) {
    const std::int64_t regs_per_warp =
        RoundUp(static_cast<std::int64_t>(config.registers_per_thread) *
                    lim.warp_size,
                lim.register_alloc_granularity);
    if (regs_per_warp * warps_per_block > lim.max_registers_per_sm) {
      Infeasible(spec, std::to_string(regs_per_warp * warps_per_block) +
                           " registers per block exceeds " +
                           std::to_string(lim.max_registers_per_sm) +
                           " registers per SM");
    }
    by_registers = (lim.max_registers_per_sm / regs_per_warp) / warps_per_block;
  }

  std::int64_t by_shared = kUnbounded;
  if (config.shared_mem_per_block > 0) {
    by_shared = lim.max_shared_mem_per_sm /
                RoundUp(config.shared_mem_per_block,
                        lim.shared_mem_alloc_granularity);
    if (by_shared == 0) {
      Infeasible(spec, "shared memory allocation granularity pushes one block "
                       "past the per-SM capacity");
    }
  }

  Occupancy result;
  result.warps_per_block = static_cast<int>(warps_per_block);
  std::int64_t best = by_warps;
  result.limiter = OccupancyLimiter::kThreads;
  if (by_registers < best) {
    best = by_registers;
    result.limiter = OccupancyLimiter::kRegisters;
  }
  if (by_shared < best) {
    best = by_shared;
    result.limiter = OccupancyLimiter::kSharedMemory;
  }
  if (lim.max_blocks_per_sm < best) {
    best = lim.max_blocks_per_sm;
    result.limiter = OccupancyLimiter::kBlocks;
  }
  if (best < 1) {
    throw InternalError("occupancy limits produced zero resident blocks");
  }
  result.blocks_per_sm = static_cast<int>(best);
  return result;
}

int BlocksPerSm(const KernelLaunchConfig& config, const GpuSpec& spec) {
  return ComputeOccupancy(config, spec).blocks_per_sm;
}

std::int64_t WaveSize(const KernelLaunchConfig& config, const GpuSpec& spec) {
  return static_cast<std::int64_t>(BlocksPerSm(config, spec)) * spec.sm_count;
}

}  // namespace wavecast
