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

#ifndef WAVECAST_PREDICT_H_
#define WAVECAST_PREDICT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wavecast/hwspec.h"
#include "wavecast/metrics_cache.h"
#include "wavecast/mlp.h"
#include "wavecast/roofline.h"
#include "wavecast/trace.h"
#include "wavecast/wavescale.h"

namespace wavecast {

enum class OpClass { kKernelAlike, kKernelVarying };
std::string_view ToString(OpClass c);

enum class PredictionPath { kWaveScaling, kMlp };
std::string_view ToString(PredictionPath path);

// Names of kernel-varying operations. Everything else is kernel-alike.
class OperationClassifier {
 public:
  // conv2d, lstm, bmm, linear.
  OperationClassifier();
  explicit OperationClassifier(std::set<std::string> kernel_varying);

  OpClass Classify(std::string_view op_name) const;
  void AddKernelVarying(std::string op_name);
  void RemoveKernelVarying(std::string_view op_name);
  const std::set<std::string, std::less<>>& kernel_varying() const {
    return varying_;
  }

 private:
  std::set<std::string, std::less<>> varying_;
};

// Trained regressors keyed by operation name.
class ModelSet {
 public:
  void Add(std::string op_name, MlpModel model);
  const MlpModel* Find(std::string_view op_name) const;
  std::vector<std::string> Names() const;
  bool empty() const { return models_.empty(); }

 private:
  std::map<std::string, MlpModel, std::less<>> models_;
};

// Loads every "<op>.wcm" file of `dir`; the model is registered under the
// file stem. A missing directory yields an empty set.
ModelSet LoadModelDirectory(const std::filesystem::path& dir);

struct PredictionContext {
  OperationClassifier classifier;
  const ModelSet* models = nullptr;
  const MetricsCache* cache = nullptr;
  ScalingEquation equation = ScalingEquation::kSimplified;
  // Scale kernel-varying ops without a model by wave scaling (with a
  // warning) instead of failing.
  bool allow_fallback = false;
};

struct KernelGamma {
  std::string kernel_name;
  double gamma = 1.0;
  // Absent when the cache had no metrics (gamma = 1).
  std::optional<GammaSelection> selection;
};

struct OperationPrediction {
  std::string op_name;
  OpClass op_class = OpClass::kKernelAlike;
  PredictionPath path = PredictionPath::kWaveScaling;
  double predicted_time = 0;  // seconds, forward + backward
  double measured_time = 0;   // seconds on the origin GPU
  std::vector<KernelGamma> gammas;  // wave-scaling path only
  bool fallback = false;
};

struct PredictionReport {
  std::string model_name;
  std::string origin_gpu;
  std::string dest_gpu;
  int batch_size = 1;
  ScalingEquation equation = ScalingEquation::kSimplified;
  std::vector<OperationPrediction> per_op;
  double measured_iteration_time = 0;  // on the origin GPU
  double iteration_time = 0;           // seconds
  double throughput = 0;               // samples / second
  std::optional<double> hourly_cost;
  std::optional<double> cost_normalized_throughput;
  std::vector<std::string> warnings;
};

OperationPrediction PredictOperation(const OperationRecord& op,
                                     const GpuSpec& origin, const GpuSpec& dest,
                                     const PredictionContext& context,
                                     std::vector<std::string>* warnings = nullptr);

// Per-op errors are collected and thrown together, each with its index.
PredictionReport PredictIteration(const IterationTrace& trace,
                                  const GpuRegistry& registry,
                                  const GpuSpec& dest,
                                  const PredictionContext& context);

// Samples per second per unit of hourly cost. Throws MissingCostError when
// `dest` has no rental price.
double CostNormalized(const PredictionReport& report, const GpuSpec& dest);

enum class RankMetric { kThroughput, kCost };
std::string_view ToString(RankMetric metric);
RankMetric ParseRankMetric(std::string_view name);

// Best first; ties broken by GPU name. kCost requires every GPU to have a
// rental price.
std::vector<PredictionReport> RankReports(std::vector<PredictionReport> reports,
                                          RankMetric metric);

}  // namespace wavecast

#endif  // WAVECAST_PREDICT_H_
