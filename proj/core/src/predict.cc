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

#include "wavecast/predict.h"

#include <algorithm>
#include <cmath>

#include "wavecast/error.h"
#include "wavecast/model_io.h"
#include "wavecast/oracle.h"

namespace wavecast {
namespace {

std::vector<double> AssembleFeatures(const MlpModel& model,
                                     const OperationRecord& op,
                                     const GpuSpec& dest) {
  const std::vector<std::string>& gpu_names = GpuFeatureNames();
  const std::vector<double> gpu_values = GpuFeatures(dest);
  std::vector<double> features;
  features.reserve(model.feature_names.size());
  for (const std::string& name : model.feature_names) {
    auto gpu = std::find(gpu_names.begin(), gpu_names.end(), name);
    if (gpu != gpu_names.end()) {
      features.push_back(gpu_values[gpu - gpu_names.begin()]);
      continue;
    }
    auto it = op.op_params.find(name);
    if (it == op.op_params.end()) {
      throw InputError("op_params lacks '" + name + "', required by the " +
                       std::string(ToString(model.operation)) + " model");
    }
    features.push_back(it->second);
  }
  return features;
}

OperationPrediction ScaleByWaves(const OperationRecord& op,
                                 const GpuSpec& origin, const GpuSpec& dest,
                                 const PredictionContext& context) {
  if (op.kernels.empty()) {
    throw InputError("kernel-alike operation has no kernel records to scale");
  }
  OperationPrediction result;
  result.path = PredictionPath::kWaveScaling;
  std::vector<double> gammas;
  gammas.reserve(op.kernels.size());
  for (const KernelRecord& kernel : op.kernels) {
    std::optional<KernelMetrics> metrics = kernel.metrics;
    if (!metrics && context.cache != nullptr) {
      metrics = context.cache->Lookup(kernel);
    }
    KernelGamma kg;
    kg.kernel_name = kernel.name;
    if (metrics) {
      kg.selection = SelectGamma(ArithmeticIntensity(*metrics), dest);
      kg.gamma = kg.selection->gamma;
    }
    gammas.push_back(kg.gamma);
    result.gammas.push_back(std::move(kg));
  }
  result.predicted_time =
      ScaleOperation(op.kernels, gammas, origin, dest, context.equation);
  return result;
}

}  // namespace

std::string_view ToString(OpClass c) {
  return c == OpClass::kKernelAlike ? "kernel-alike" : "kernel-varying";
}

std::string_view ToString(PredictionPath path) {
  return path == PredictionPath::kWaveScaling ? "wave_scaling" : "mlp";
}

OperationClassifier::OperationClassifier() {
  for (OpKind op : AllOpKinds()) varying_.emplace(ToString(op));
}

OperationClassifier::OperationClassifier(std::set<std::string> kernel_varying)
    : varying_(kernel_varying.begin(), kernel_varying.end()) {}

OpClass OperationClassifier::Classify(std::string_view op_name) const {
  return varying_.contains(op_name) ? OpClass::kKernelVarying
                                    : OpClass::kKernelAlike;
}

void OperationClassifier::AddKernelVarying(std::string op_name) {
  varying_.insert(std::move(op_name));
}

void OperationClassifier::RemoveKernelVarying(std::string_view op_name) {
  auto it = varying_.find(op_name);
  if (it != varying_.end()) varying_.erase(it);
}

void ModelSet::Add(std::string op_name, MlpModel model) {
  models_.insert_or_assign(std::move(op_name), std::move(model));
}

const MlpModel* ModelSet::Find(std::string_view op_name) const {
  auto it = models_.find(op_name);
  return it == models_.end() ? nullptr : &it->second;
}

std::vector<std::string> ModelSet::Names() const {
  std::vector<std::string> names;
  for (const auto& [name, model] : models_) names.push_back(name);
  return names;
}

ModelSet LoadModelDirectory(const std::filesystem::path& dir) {
  ModelSet set;
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) return set;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == kModelExtension) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    set.Add(file.stem().string(), LoadModel(file));
  }
  return set;
}

OperationPrediction PredictOperation(const OperationRecord& op,
                                     const GpuSpec& origin, const GpuSpec& dest,
                                     const PredictionContext& context,
                                     std::vector<std::string>* warnings) {
  const OpClass op_class = context.classifier.Classify(op.op_name);
  OperationPrediction result;
  if (op_class == OpClass::kKernelAlike) {
    result = ScaleByWaves(op, origin, dest, context);
  } else {
    const MlpModel* model =
        context.models != nullptr ? context.models->Find(op.op_name) : nullptr;
    if (model == nullptr) {
      if (!context.allow_fallback) {
        throw MissingModelError(
            "no MLP model for kernel-varying operation '" + op.op_name +
            "'; train one with `wavecast mlp-train --op " + op.op_name +
            "` into the models directory, or pass --fallback to wave-scale it");
      }
      result = ScaleByWaves(op, origin, dest, context);
      result.fallback = true;
      if (warnings != nullptr) {
        warnings->push_back("operation '" + op.op_name +
                            "' has no MLP model; fell back to wave scaling");
      }
    } else {
      result.path = PredictionPath::kMlp;
      result.predicted_time = Forward(*model, AssembleFeatures(*model, op, dest));
      if (!(result.predicted_time > 0) || !std::isfinite(result.predicted_time)) {
        throw InputError("the " + op.op_name + " model predicted a non-positive "
                         "time; the op parameters are likely far outside its "
                         "training range");
      }
    }
  }
  result.op_name = op.op_name;
  result.op_class = op_class;
  result.measured_time = op.MeasuredTime();
  return result;
}

PredictionReport PredictIteration(const IterationTrace& trace,
                                  const GpuRegistry& registry,
                                  const GpuSpec& dest,
                                  const PredictionContext& context) {
  const GpuSpec& origin = registry.At(trace.origin_gpu);
  PredictionReport report;
  report.model_name = trace.model_name;
  report.origin_gpu = origin.name;
  report.dest_gpu = dest.name;
  report.batch_size = trace.batch_size;
  report.equation = context.equation;

  std::vector<std::string> problems;
  bool all_missing_models = true;
  for (std::size_t i = 0; i < trace.operations.size(); ++i) {
    const OperationRecord& op = trace.operations[i];
    try {
      report.per_op.push_back(
          PredictOperation(op, origin, dest, context, &report.warnings));
    } catch (const InputError& e) {
      if (dynamic_cast<const MissingModelError*>(&e) == nullptr) {
        all_missing_models = false;
      }
      problems.push_back("operation " + std::to_string(i) + " ('" + op.op_name +
                         "'): " + e.what());
    }
  }
  if (!problems.empty()) {
    std::string message = "prediction onto " + dest.name + " failed:";
    for (const std::string& p : problems) message += "\n  " + p;
    if (all_missing_models) throw MissingModelError(message);
    throw InputError(message);
  }

  for (const OperationPrediction& p : report.per_op) {
    report.iteration_time += p.predicted_time;
    report.measured_iteration_time += p.measured_time;
  }
  report.throughput = report.batch_size / report.iteration_time;
  report.hourly_cost = dest.hourly_cost;
  if (dest.hourly_cost) {
    report.cost_normalized_throughput = report.throughput / *dest.hourly_cost;
  }
  return report;
}

double CostNormalized(const PredictionReport& report, const GpuSpec& dest) {
  if (!dest.hourly_cost) {
    throw MissingCostError("GPU '" + dest.name +
                           "' has no hourly_cost_usd in the registry");
  }
  return report.throughput / *dest.hourly_cost;
}

std::string_view ToString(RankMetric metric) {
  return metric == RankMetric::kThroughput ? "throughput" : "cost";
}

RankMetric ParseRankMetric(std::string_view name) {
  if (name == "throughput") return RankMetric::kThroughput;
  if (name == "cost") return RankMetric::kCost;
  throw InputError("unknown ranking metric '" + std::string(name) +
                   "' (expected throughput or cost)");
}

std::vector<PredictionReport> RankReports(std::vector<PredictionReport> reports,
                                          RankMetric metric) {
  auto score = [metric](const PredictionReport& r) {
    if (metric == RankMetric::kThroughput) return r.throughput;
    if (!r.cost_normalized_throughput) {
      throw MissingCostError("cannot rank by cost: GPU '" + r.dest_gpu +
                             "' has no hourly_cost_usd in the registry");
    }
    return *r.cost_normalized_throughput;
  };
  for (const PredictionReport& r : reports) score(r);
  std::stable_sort(reports.begin(), reports.end(),
                   [&](const PredictionReport& a, const PredictionReport& b) {
                     const double sa = score(a);
                     const double sb = score(b);
                     if (sa != sb) return sa > sb;
                     return a.dest_gpu < b.dest_gpu;
                   });
  return reports;
}

}  // namespace wavecast
