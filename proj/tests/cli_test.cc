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

#include "cli.h"

#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "test_support.h"
#include "wavecast/error.h"
#include "wavecast/dataset.h"
#include "wavecast/trace.h"

namespace wavecast {
namespace {

using nlohmann::json;
using testing::BundledRegistry;
using testing::DataPath;
using testing::ReadFile;
using testing::TempDir;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result RunArgs(std::vector<std::string> args) {
  args.insert(args.begin(), "wavecast");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Tiny() { return DataPath("traces/tiny_v100.json").string(); }

TEST(CliTest, PredictOntoOriginReproducesMeasuredTime) {
  TempDir dir;
  const std::string trace = (dir / "e.json").string();
  ASSERT_EQ(RunArgs({"synth", "--template", "elementwise", "--gpu", "V100", "-o", trace})
                .code,
            kExitOk);
  const Result r = RunArgs({"--format", "json", "predict", trace, "V100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  const json& rep = j.at("reports")[0];
  EXPECT_EQ(rep.at("iteration_time_s").get<double>(),
            rep.at("measured_iteration_time_s").get<double>());
}

TEST(CliTest, MultipleDestinationsKeepCommandLineOrder) {
  const Result r = RunArgs({"--format", "json", "predict", Tiny(), "T4", "P100",
                        "V100", "--fallback"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j.at("reports").size(), 3u);
  EXPECT_EQ(j.at("reports")[0].at("dest_gpu"), "T4");
  EXPECT_EQ(j.at("reports")[1].at("dest_gpu"), "P100");
  EXPECT_EQ(j.at("reports")[2].at("dest_gpu"), "V100");
}

TEST(CliTest, UnknownGpuListsKnownNames) {
  const Result r = RunArgs({"predict", Tiny(), "H100", "--fallback"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("H100"), std::string::npos);
  EXPECT_NE(r.err.find("V100"), std::string::npos);
}

TEST(CliTest, MissingModelIsInputError) {
  TempDir dir;
  const Result r = RunArgs({"--models", (dir / "none").string(), "predict", Tiny(), "T4"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("conv2d"), std::string::npos) << r.err;
}

TEST(CliTest, KernelVaryingOverride) {
  TempDir dir;
  const Result r = RunArgs({"--models", (dir / "none").string(), "predict", Tiny(),
                        "T4", "--kernel-varying", ""});
  EXPECT_EQ(r.code, kExitOk) << r.err;
}

TEST(CliTest, BadArgumentsAndFiles) {
  EXPECT_EQ(RunArgs({"predict"}).code, kExitInputError);
  EXPECT_EQ(RunArgs({"frobnicate"}).code, kExitInputError);
  EXPECT_EQ(RunArgs({"--help"}).code, kExitOk);
  EXPECT_EQ(RunArgs({"predict", "/nonexistent/trace.json", "T4"}).code, kExitInputError);
  EXPECT_EQ(RunArgs({"--format", "xml", "gpus"}).code, kExitInputError);
  EXPECT_EQ(RunArgs({"--registry", "/nonexistent.yaml", "gpus"}).code, kExitInputError);
}

TEST(CliTest, RankByCost) {
  const Result r = RunArgs({"--format", "json", "rank", Tiny(), "T4", "V100", "P100",
                        "--metric", "cost", "--fallback"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("metric"), "cost");
  ASSERT_EQ(j.at("ranking").size(), 3u);
  double previous = 1e300;
  for (const json& row : j.at("ranking")) {
    const double v = row.at("cost_normalized_throughput").get<double>();
    EXPECT_LE(v, previous);
    previous = v;
  }
  const Result unpriced =
      RunArgs({"rank", Tiny(), "P4000", "T4", "--metric", "cost", "--fallback"});
  EXPECT_EQ(unpriced.code, kExitInputError);
  EXPECT_NE(unpriced.err.find("P4000"), std::string::npos);
}

TEST(CliTest, GammaWithoutFlopsIsOne) {
  const Result r = RunArgs({"--format", "json", "gamma", "--gpu", "V100", "--flops",
                        "0", "--bytes", "1000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("gamma"), 1.0);
  EXPECT_EQ(j.at("branch"), "linear");
}

TEST(CliTest, OccupancyReportsLimiter) {
  const Result r = RunArgs({"--format", "json", "occupancy", "--gpu", "V100",
                        "--threads", "1024", "--registers", "16"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("blocks_per_sm"), 2);
  EXPECT_EQ(j.at("limiter"), "threads");
  EXPECT_EQ(j.at("wave_size"), 160);
  EXPECT_EQ(RunArgs({"occupancy", "--gpu", "V100", "--threads", "1024",
                 "--registers", "255"})
                .code,
            kExitInputError);
}

TEST(CliTest, DatasetGenIsDeterministic) {
  TempDir dir;
  const std::string a = (dir / "a.csv").string();
  const std::string b = (dir / "b.csv").string();
  for (const std::string& path : {a, b}) {
    ASSERT_EQ(RunArgs({"--seed", "4", "dataset-gen", "--op", "bmm", "--count", "10",
                   "-o", path})
                  .code,
              kExitOk);
  }
  EXPECT_EQ(ReadFile(a), ReadFile(b));
  EXPECT_EQ(ReadDatasetCsv(std::filesystem::path(a)).samples.size(),
            10 * BundledRegistry().specs().size());
}

TEST(CliTest, TrainEvaluateAndPredictWithModel) {
  TempDir dir;
  const std::string data = (dir / "conv.csv").string();
  ASSERT_EQ(RunArgs({"dataset-gen", "--op", "conv2d", "--count", "100",
                 "--round-robin", "-o", data})
                .code,
            kExitOk);
  const std::string models = (dir / "models").string();
  const Result train =
      RunArgs({"--models", models, "mlp-train", "--data", data, "--robust",
           "--epochs", "2", "--layers", "1", "--width", "8", "--batch-size", "16"});
  ASSERT_EQ(train.code, kExitOk) << train.err;
  ASSERT_TRUE(std::filesystem::exists(dir / "models/conv2d.wcm"));
  const Result eval = RunArgs({"--format", "json", "mlp-eval", "--model",
                           (dir / "models/conv2d.wcm").string(), "--data", data});
  ASSERT_EQ(eval.code, kExitOk) << eval.err;
  EXPECT_GT(json::parse(eval.out).at("mape").get<double>(), 0.0);
  const Result predict = RunArgs({"--models", models, "--format", "json", "predict",
                              Tiny(), "T4", "--kernel-varying", "conv2d"});
  ASSERT_EQ(predict.code, kExitOk) << predict.err;
  EXPECT_EQ(json::parse(predict.out).at("reports")[0].at("operations")[0].at("path"),
            "mlp");
}

TEST(CliTest, ExtrapolateFromPoints) {
  const Result r = RunArgs({"--format", "json", "extrapolate", "--point", "8:21",
                        "--point", "16:37", "--point", "32:69", "--target", "100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_DOUBLE_EQ(json::parse(r.out).at("seconds").get<double>(), 205.0);
}

TEST(CliTest, SynthWritesCacheSidecar) {
  TempDir dir;
  const std::string trace = (dir / "r.json").string();
  const std::string cache = (dir / "r.metrics.json").string();
  ASSERT_EQ(RunArgs({"synth", "--template", "resnet-like", "--gpu", "P100", "--batch",
                 "8", "--no-metrics", "--cache-out", cache, "-o", trace})
                .code,
            kExitOk);
  const IterationTrace t = LoadTraceFile(trace, BundledRegistry());
  for (const OperationRecord& op : t.operations) {
    for (const KernelRecord& k : op.kernels) EXPECT_FALSE(k.metrics.has_value());
  }
  const Result r = RunArgs({"--cache", cache, "--format", "json", "predict", trace,
                        "T4", "--kernel-varying", ""});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json op = json::parse(r.out).at("reports")[0].at("operations")[1];
  EXPECT_EQ(op.at("gammas")[0].at("source"), "metrics");
}

TEST(CliTest, PlanListsSignificantKernels) {
  const Result r = RunArgs({"--percentile", "50", "plan", Tiny()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("wgrad_dgrad_bwd"), std::string::npos);
  EXPECT_EQ(r.out.find("elementwise_relu_fwd"), std::string::npos);
}

}  // namespace
}  // namespace wavecast
