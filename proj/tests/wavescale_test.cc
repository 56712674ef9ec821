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

#include <gtest/gtest.h>

#include <random>

#include "test_support.h"
#include "wavecast/error.h"

namespace wavecast {
namespace {

using testing::BruteForceBlocksPerSm;
using testing::BundledRegistry;
using testing::RelativeError;

KernelRecord RandomKernel(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> warps(1, 32);
  std::uniform_int_distribution<int> regs(0, 64);
  std::uniform_int_distribution<int> smem(0, 32 * 1024);
  std::uniform_int_distribution<std::int64_t> blocks(1, 200000);
  std::uniform_real_distribution<double> log_time(-12.0, 0.0);
  KernelRecord k;
  k.name = "k";
  k.launch.threads_per_block = 32 * warps(rng);
  k.launch.registers_per_thread = regs(rng);
  k.launch.shared_mem_per_block = smem(rng);
  k.launch.block_count = blocks(rng);
  k.measured_time = std::exp(log_time(rng));
  return k;
}

std::int64_t OracleWave(const KernelRecord& k, const GpuSpec& s) {
  return static_cast<std::int64_t>(BruteForceBlocksPerSm(k.launch, s)) * s.sm_count;
}

TEST(WavescaleTest, MatchesStraightLineDerivation) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> gamma_dist(0.0, 1.0);
  const auto& specs = BundledRegistry().specs();
  for (int trial = 0; trial < 500; ++trial) {
    const KernelRecord k = RandomKernel(rng);
    const GpuSpec& o = specs[trial % specs.size()];
    const GpuSpec& d = specs[(trial / specs.size()) % specs.size()];
    const double g = gamma_dist(rng);
    const std::int64_t wo = OracleWave(k, o);
    const std::int64_t wd = OracleWave(k, d);
    const double exact = testing::StraightLineExact(
        k.measured_time, k.launch.block_count, wo, wd, o.mem_bandwidth,
        d.mem_bandwidth, o.clock, d.clock, g);
    const double simplified = testing::StraightLineSimplified(
        k.measured_time, wo, wd, o.mem_bandwidth, d.mem_bandwidth, o.clock,
        d.clock, g);
    EXPECT_LT(RelativeError(ScaleKernelExact(k, o, d, g), exact), 1e-12);
    EXPECT_LT(RelativeError(ScaleKernel(k, o, d, g), simplified), 1e-12);
  }
}

TEST(WavescaleTest, SameGpuIsIdentity) {
  std::mt19937_64 rng(11);
  for (const GpuSpec& s : BundledRegistry().specs()) {
    for (int i = 0; i < 100; ++i) {
      const KernelRecord k = RandomKernel(rng);
      const double g = (i % 11) / 10.0;
      EXPECT_EQ(ScaleKernel(k, s, s, g), k.measured_time);
      EXPECT_EQ(ScaleKernelExact(k, s, s, g), k.measured_time);
    }
  }
}

TEST(WavescaleTest, GammaOneScalesByBandwidthAlone) {
  KernelRecord k;
  k.launch = {100000, 256, 32, 0};
  k.measured_time = 2e-3;
  const GpuSpec& v = BundledRegistry().At("V100");
  const GpuSpec& t = BundledRegistry().At("T4");
  EXPECT_NEAR(ScaleKernel(k, v, t, 1.0), 2e-3 * v.mem_bandwidth / t.mem_bandwidth,
              1e-15);
}

TEST(WavescaleTest, GammaZeroScalesByWavesAndClock) {
  KernelRecord k;
  k.launch = {100000, 256, 32, 0};
  k.measured_time = 2e-3;
  const GpuSpec& v = BundledRegistry().At("V100");
  const GpuSpec& t = BundledRegistry().At("T4");
  const double expected = 2e-3 * static_cast<double>(WaveSize(k.launch, v)) /
                          static_cast<double>(WaveSize(k.launch, t)) * v.clock /
                          t.clock;
  EXPECT_NEAR(ScaleKernel(k, v, t, 0.0), expected, 1e-15);
}

TEST(WavescaleTest, ExactConvergesToSimplifiedWithManyWaves) {
  std::mt19937_64 rng(3);
  const auto& specs = BundledRegistry().specs();
  double previous = 1e300;
  for (std::int64_t blocks : {100LL, 1000LL, 10000LL, 100000LL, 1000000LL}) {
    std::mt19937_64 local(3);
    double sum = 0;
    int n = 0;
    for (int trial = 0; trial < 200; ++trial) {
      KernelRecord k = RandomKernel(local);
      k.launch.block_count = blocks;
      const GpuSpec& o = specs[trial % specs.size()];
      const GpuSpec& d = specs[(trial + 1 + trial / specs.size()) % specs.size()];
      const double g = 0.5;
      sum += RelativeError(ScaleKernelExact(k, o, d, g), ScaleKernel(k, o, d, g));
      ++n;
    }
    const double mean = sum / n;
    EXPECT_LT(mean, previous) << blocks;
    previous = mean;
  }
  EXPECT_LT(previous, 0.01);
}

TEST(WavescaleTest, OperationSumsKernelsInOrder) {
  const GpuSpec& v = BundledRegistry().At("V100");
  const GpuSpec& p = BundledRegistry().At("P100");
  std::vector<KernelRecord> ks(3);
  ks[0] = {"a", {1000, 128, 16, 0}, 1e-4, std::nullopt};
  ks[1] = {"b", {50, 1024, 64, 4096}, 3e-5, std::nullopt};
  ks[2] = {"c", {70000, 256, 40, 0}, 2e-3, std::nullopt};
  const std::vector<double> gammas = {1.0, 0.3, 0.7};
  double expected = 0.0;
  for (int i = 0; i < 3; ++i) expected += ScaleKernel(ks[i], v, p, gammas[i]);
  EXPECT_EQ(ScaleOperation(ks, gammas, v, p), expected);
}

TEST(WavescaleTest, ErrorsNameTheKernel) {
  const GpuSpec& v = BundledRegistry().At("V100");
  std::vector<KernelRecord> ks(2);
  ks[0] = {"fine", {10, 128, 16, 0}, 1e-4, std::nullopt};
  ks[1] = {"huge", {10, 1024, 255, 0}, 1e-4, std::nullopt};
  const std::vector<double> gammas = {1.0, 1.0};
  try {
    ScaleOperation(ks, gammas, v, v);
    FAIL();
  } catch (const InfeasibleLaunchError& e) {
    EXPECT_NE(std::string(e.what()).find("kernel 1 ('huge')"), std::string::npos);
  }
  EXPECT_THROW(ScaleOperation({}, {}, v, v), InputError);
  KernelRecord bad = ks[0];
  bad.measured_time = 0;
  EXPECT_THROW(ScaleKernel(bad, v, v, 1.0), InputError);
  EXPECT_THROW(ScaleKernel(ks[0], v, v, 1.5), InputError);
}

}  // namespace
}  // namespace wavecast
