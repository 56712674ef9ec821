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

#include "wavecast/mlp.h"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "wavecast/error.h"

namespace wavecast {
namespace {

using MatrixF = Network<float>::Matrix;
using RowVectorF = Network<float>::RowVector;

constexpr Eigen::Index kInferenceChunk = 4096;

void ApplyFeatureTransform(FeatureTransform transform,
                           std::vector<double>& features) {
  if (transform == FeatureTransform::kIdentity) return;
  for (double& f : features) {
    if (!(f > -1.0)) {
      throw InputError("log1p feature transform needs features > -1");
    }
    f = std::log1p(f);
  }
}

// Normalized features, one column per sample.
MatrixF FeatureMatrix(const MlpModel& model, std::span<const Sample> samples,
                      std::span<const std::size_t> indices) {
  const std::size_t width = model.input_mean.size();
  MatrixF m(static_cast<Eigen::Index>(width),
            static_cast<Eigen::Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    const Sample& s = samples[indices[c]];
    std::vector<double> f = s.Features();
    ApplyFeatureTransform(model.feature_transform, f);
    if (f.size() != width) {
      throw InputError("sample has " + std::to_string(f.size()) +
                       " features, model expects " + std::to_string(width));
    }
    for (std::size_t r = 0; r < width; ++r) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          static_cast<float>((f[r] - model.input_mean[r]) / model.input_std[r]);
    }
  }
  return m;
}

std::vector<double> PredictColumns(const MlpModel& model, const MatrixF& x) {
  std::vector<double> out(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index begin = 0; begin < x.cols(); begin += kInferenceChunk) {
    const Eigen::Index n = std::min(kInferenceChunk, x.cols() - begin);
    const RowVectorF raw = model.network.Forward(x.middleCols(begin, n));
    for (Eigen::Index j = 0; j < n; ++j) {
      out[static_cast<std::size_t>(begin + j)] =
          model.transform.Apply(static_cast<double>(raw(j)));
    }
  }
  return out;
}

double EvaluateIndices(const MlpModel& model, std::span<const Sample> samples,
                       std::span<const std::size_t> indices) {
  const MatrixF x = FeatureMatrix(model, samples, indices);
  const std::vector<double> predicted = PredictColumns(model, x);
  std::vector<double> measured;
  measured.reserve(indices.size());
  for (std::size_t i : indices) measured.push_back(samples[i].target_time);
  return Mape(predicted, measured);
}

struct AdamState {
  Network<float> m;
  Network<float> v;
  long step = 0;
};

void AdamStep(Network<float>& params, const Network<float>& grad,
              AdamState& state, const TrainConfig& config, double lr) {
  ++state.step;
  const float b1 = static_cast<float>(config.adam_beta1);
  const float b2 = static_cast<float>(config.adam_beta2);
  const float eps = static_cast<float>(config.adam_epsilon);
  const float wd = static_cast<float>(config.weight_decay);
  const double bias1 = 1.0 - std::pow(config.adam_beta1, state.step);
  const double bias2 = 1.0 - std::pow(config.adam_beta2, state.step);
  const float step_size = static_cast<float>(lr / bias1);
  const float sqrt_bias2 = static_cast<float>(std::sqrt(bias2));

  auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
    auto pa = p.array();
    const auto ga = g.array() + wd * pa;
    m.array() = b1 * m.array() + (1.0f - b1) * ga;
    v.array() = b2 * v.array() + (1.0f - b2) * ga.square();
    pa -= step_size * m.array() / (v.array().sqrt() / sqrt_bias2 + eps);
  };
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    update(params.layers[l].weights, grad.layers[l].weights,
           state.m.layers[l].weights, state.v.layers[l].weights);
    update(params.layers[l].bias, grad.layers[l].bias, state.m.layers[l].bias,
           state.v.layers[l].bias);
  }
}

}  // namespace

std::string_view ToString(TargetSpace space) {
  return space == TargetSpace::kRaw ? "raw" : "log";
}

TargetSpace ParseTargetSpace(std::string_view name) {
  if (name == "raw") return TargetSpace::kRaw;
  if (name == "log") return TargetSpace::kLog;
  throw InputError("unknown target space '" + std::string(name) +
                   "'; expected raw or log");
}

std::string_view ToString(FeatureTransform transform) {
  return transform == FeatureTransform::kIdentity ? "identity" : "log1p";
}

FeatureTransform ParseFeatureTransform(std::string_view name) {
  if (name == "identity") return FeatureTransform::kIdentity;
  if (name == "log1p") return FeatureTransform::kLog1p;
  throw InputError("unknown feature transform '" + std::string(name) +
                   "'; expected identity or log1p");
}

std::string_view ToString(LossFunction loss) {
  return loss == LossFunction::kMape ? "mape" : "log_abs";
}

LossFunction ParseLossFunction(std::string_view name) {
  if (name == "mape") return LossFunction::kMape;
  if (name == "log_abs") return LossFunction::kLogAbsolute;
  throw InputError("unknown loss '" + std::string(name) +
                   "'; expected mape or log_abs");
}

TrainConfig RobustTrainConfig() {
  TrainConfig config;
  config.target_space = TargetSpace::kLog;
  config.feature_transform = FeatureTransform::kLog1p;
  config.loss = LossFunction::kLogAbsolute;
  return config;
}

double Forward(const MlpModel& model, std::span<const double> features) {
  const std::size_t width = model.input_mean.size();
  if (features.size() != width ||
      static_cast<std::size_t>(model.network.InputSize()) != width) {
    throw InputError("feature vector has " + std::to_string(features.size()) +
                     " entries, model for " +
                     std::string(ToString(model.operation)) + " expects " +
                     std::to_string(width));
  }
  std::vector<double> f(features.begin(), features.end());
  ApplyFeatureTransform(model.feature_transform, f);
  MatrixF x(static_cast<Eigen::Index>(width), 1);
  for (std::size_t r = 0; r < width; ++r) {
    x(static_cast<Eigen::Index>(r), 0) =
        static_cast<float>((f[r] - model.input_mean[r]) / model.input_std[r]);
  }
  return model.transform.Apply(
      static_cast<double>(model.network.Forward(x)(0)));
}

std::vector<double> Predict(const MlpModel& model,
                            std::span<const Sample> samples) {
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  return PredictColumns(model, FeatureMatrix(model, samples, all));
}

double Mape(std::span<const double> predicted,
            std::span<const double> measured) {
  if (predicted.size() != measured.size()) {
    throw InputError("prediction and measurement counts differ");
  }
  if (measured.empty()) throw InputError("MAPE of an empty set is undefined");
  double sum = 0.0;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    if (!(measured[i] > 0)) {
      throw InputError("MAPE requires positive measurements (sample " +
                       std::to_string(i) + ")");
    }
    sum += std::abs(predicted[i] - measured[i]) / measured[i];
  }
  return sum / static_cast<double>(measured.size());
}

double Evaluate(const MlpModel& model, std::span<const Sample> samples) {
  if (samples.empty()) throw InputError("cannot evaluate on an empty dataset");
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  return EvaluateIndices(model, samples, all);
}

double Evaluate(const MlpModel& model, const Dataset& dataset) {
  if (dataset.op != model.operation) {
    throw InputError("dataset is for " + std::string(ToString(dataset.op)) +
                     ", model is for " + std::string(ToString(model.operation)));
  }
  return Evaluate(model, std::span<const Sample>(dataset.samples));
}

Normalization ComputeNormalization(std::span<const Sample> samples,
                                   FeatureTransform transform) {
  if (samples.empty()) throw InputError("cannot normalise an empty set");
  std::vector<std::vector<double>> rows;
  rows.reserve(samples.size());
  for (const Sample& s : samples) {
    rows.push_back(s.Features());
    ApplyFeatureTransform(transform, rows.back());
  }
  const std::size_t width = rows.front().size();
  Normalization n;
  n.mean.assign(width, 0.0);
  n.std.assign(width, 0.0);
  for (const std::vector<double>& f : rows) {
    for (std::size_t i = 0; i < width; ++i) n.mean[i] += f[i];
  }
  for (double& m : n.mean) m /= static_cast<double>(samples.size());
  for (const std::vector<double>& f : rows) {
    for (std::size_t i = 0; i < width; ++i) {
      const double d = f[i] - n.mean[i];
      n.std[i] += d * d;
    }
  }
  for (double& v : n.std) {
    v = std::sqrt(v / static_cast<double>(samples.size()));
    if (!(v > 0)) v = 1.0;
  }
  return n;
}

DatasetSplit SplitByConfiguration(const Dataset& dataset,
                                  double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw InputError("train fraction must lie in (0, 1)");
  }
  std::vector<std::int64_t> ids;
  for (const Sample& s : dataset.samples) ids.push_back(s.config_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(ids.size())));
  std::map<std::int64_t, bool> in_train;
  for (std::size_t i = 0; i < ids.size(); ++i) in_train[ids[i]] = i < n_train;

  DatasetSplit split;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    (in_train[dataset.samples[i].config_id] ? split.train : split.test)
        .push_back(i);
  }
  return split;
}

TrainResult Train(const Dataset& dataset, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  if (dataset.samples.empty()) throw InputError("cannot train on an empty dataset");
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    if (!(dataset.samples[i].target_time > 0)) {
      throw InputError("sample " + std::to_string(i) +
                       " has a non-positive target time");
    }
  }
  if (config.hidden_layers < 1 || config.hidden_width < 1 ||
      config.batch_size < 1 || config.epochs < 0) {
    throw InputError("invalid network or training configuration");
  }
  if (config.loss == LossFunction::kLogAbsolute &&
      config.target_space != TargetSpace::kLog) {
    throw InputError("the log_abs loss requires the log target space");
  }

  TrainResult result;
  result.split = SplitByConfiguration(dataset, config.train_fraction, config.seed);
  const std::vector<std::size_t>& train_idx = result.split.train;
  const std::vector<std::size_t>& test_idx = result.split.test;
  if (train_idx.size() < static_cast<std::size_t>(config.batch_size)) {
    throw InputError("training set has " + std::to_string(train_idx.size()) +
                     " samples, fewer than one batch of " +
                     std::to_string(config.batch_size));
  }
  const std::span<const Sample> samples(dataset.samples);

  std::vector<Sample> train_samples;
  train_samples.reserve(train_idx.size());
  for (std::size_t i : train_idx) train_samples.push_back(samples[i]);
  const Normalization norm =
      ComputeNormalization(train_samples, config.feature_transform);

  MlpModel& model = result.model;
  model.operation = dataset.op;
  model.feature_names = dataset.ColumnNames();
  model.input_mean = norm.mean;
  model.input_std = norm.std;
  model.feature_transform = config.feature_transform;
  model.transform = {config.target_space, config.output_scale};
  model.hyperparameters = config;

  std::vector<int> sizes = {static_cast<int>(dataset.FeatureCount())};
  for (int i = 0; i < config.hidden_layers; ++i) sizes.push_back(config.hidden_width);
  sizes.push_back(1);

  std::mt19937_64 rng(config.seed);
  model.network = Network<float>(sizes);
  model.network.InitHeUniform(rng);
  {
    // Start the output at the median training target.
    std::vector<double> targets;
    for (std::size_t i : train_idx) targets.push_back(samples[i].target_time);
    std::nth_element(targets.begin(), targets.begin() + targets.size() / 2,
                     targets.end());
    const double median = targets[targets.size() / 2] / config.output_scale;
    model.network.layers.back().bias(0) = static_cast<float>(
        config.target_space == TargetSpace::kRaw ? median : std::log(median));
  }

  const MatrixF train_x = FeatureMatrix(model, samples, train_idx);
  RowVectorF train_y(static_cast<Eigen::Index>(train_idx.size()));
  for (std::size_t i = 0; i < train_idx.size(); ++i) {
    train_y(static_cast<Eigen::Index>(i)) =
        static_cast<float>(samples[train_idx[i]].target_time);
  }

  AdamState adam{Network<float>(sizes), Network<float>(sizes), 0};
  Network<float> grad(sizes);
  std::vector<Eigen::Index> order(train_idx.size());
  std::iota(order.begin(), order.end(), 0);
  MatrixF batch_x;
  RowVectorF batch_y;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const double lr = config.LearningRateAt(epoch);
    std::shuffle(order.begin(), order.end(), rng);
    double mape_sum = 0.0;
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t n =
          std::min(order.size() - begin, static_cast<std::size_t>(config.batch_size));
      batch_x.resize(train_x.rows(), static_cast<Eigen::Index>(n));
      batch_y.resize(static_cast<Eigen::Index>(n));
      for (std::size_t j = 0; j < n; ++j) {
        const Eigen::Index src = order[begin + j];
        batch_x.col(static_cast<Eigen::Index>(j)) = train_x.col(src);
        batch_y(static_cast<Eigen::Index>(j)) = train_y(src);
      }
      double batch_mape = 0.0;
      model.network.LossAndGradient(batch_x, batch_y, model.transform,
                                    config.loss, &grad, &batch_mape);
      mape_sum += batch_mape * static_cast<double>(n);
      AdamStep(model.network, grad, adam, config, lr);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.learning_rate = lr;
    stats.train_mape = mape_sum / static_cast<double>(order.size());
    stats.test_mape = std::numeric_limits<double>::quiet_NaN();
    if (config.evaluate_every_epoch && !test_idx.empty()) {
      stats.test_mape = EvaluateIndices(model, samples, test_idx);
    }
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }

  result.train_mape = EvaluateIndices(model, samples, train_idx);
  result.test_mape = test_idx.empty()
                         ? std::numeric_limits<double>::quiet_NaN()
                         : EvaluateIndices(model, samples, test_idx);
  model.train_mape = result.train_mape;
  model.test_mape = result.test_mape;
  return result;
}

std::vector<SweepPoint> ArchitectureSweep(const Dataset& dataset,
                                          std::span<const int> hidden_layers,
                                          std::span<const int> hidden_widths,
                                          const TrainConfig& base) {
  std::vector<SweepPoint> points;
  for (int layers : hidden_layers) {
    for (int width : hidden_widths) {
      TrainConfig config = base;
      config.hidden_layers = layers;
      config.hidden_width = width;
      config.evaluate_every_epoch = false;
      const TrainResult r = Train(dataset, config);
      points.push_back({layers, width, r.train_mape, r.test_mape});
    }
  }
  return points;
}

}  // namespace wavecast
