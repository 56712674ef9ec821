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

#ifndef WAVECAST_MLP_H_
#define WAVECAST_MLP_H_

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wavecast/dataset.h"
#include "wavecast/error.h"
#include "wavecast/oracle.h"

namespace wavecast {

// How the scalar network output maps to a time in seconds.
enum class TargetSpace {
  kRaw,  // seconds = output * output_scale
  kLog,  // seconds = exp(output) * output_scale
};

std::string_view ToString(TargetSpace space);
TargetSpace ParseTargetSpace(std::string_view name);

// Elementwise map applied to features before z-normalization.
enum class FeatureTransform {
  kIdentity,
  kLog1p,  // log(1 + x); features must be > -1
};

std::string_view ToString(FeatureTransform transform);
FeatureTransform ParseFeatureTransform(std::string_view name);

enum class LossFunction {
  kMape,         // mean |predicted - measured| / measured
  kLogAbsolute,  // mean |log predicted - log measured|; log target space only
};

std::string_view ToString(LossFunction loss);
LossFunction ParseLossFunction(std::string_view name);

struct OutputTransform {
  TargetSpace space = TargetSpace::kRaw;
  double scale = 1e-3;

  template <typename Scalar>
  Scalar Apply(Scalar output) const {
    const Scalar s = static_cast<Scalar>(scale);
    return space == TargetSpace::kRaw ? output * s : std::exp(output) * s;
  }

  bool operator==(const OutputTransform&) const = default;
};

template <typename Scalar>
struct DenseLayer {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix weights;  // out x in
  Vector bias;     // out

  bool operator==(const DenseLayer& other) const {
    return weights.rows() == other.weights.rows() &&
           weights.cols() == other.weights.cols() &&
           weights == other.weights && bias == other.bias;
  }
};

// Fully connected ReLU stack with a linear scalar output. Inputs are
// column-major batches: one column per sample.
template <typename Scalar>
class Network {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  Network() = default;

  // layer_sizes = {inputs, hidden..., 1}; parameters start at zero.
  explicit Network(const std::vector<int>& layer_sizes) {
    for (std::size_t i = 1; i < layer_sizes.size(); ++i) {
      DenseLayer<Scalar> layer;
      layer.weights = Matrix::Zero(layer_sizes[i], layer_sizes[i - 1]);
      layer.bias = Vector::Zero(layer_sizes[i]);
      layers.push_back(std::move(layer));
    }
  }

  // Uniform He fan-in initialisation, U(-sqrt(6/fan_in), +sqrt(6/fan_in)),
  // biases zero.
  void InitHeUniform(std::mt19937_64& rng) {
    for (DenseLayer<Scalar>& layer : layers) {
      const double bound = std::sqrt(6.0 / static_cast<double>(layer.weights.cols()));
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
          layer.weights(i, j) = static_cast<Scalar>(dist(rng));
        }
      }
      layer.bias.setZero();
    }
  }

  std::vector<int> LayerSizes() const {
    std::vector<int> sizes;
    if (layers.empty()) return sizes;
    sizes.push_back(static_cast<int>(layers.front().weights.cols()));
    for (const auto& layer : layers) {
      sizes.push_back(static_cast<int>(layer.weights.rows()));
    }
    return sizes;
  }

  int InputSize() const {
    return layers.empty() ? 0 : static_cast<int>(layers.front().weights.cols());
  }

  std::size_t ParameterCount() const {
    std::size_t n = 0;
    for (const auto& layer : layers) {
      n += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
    }
    return n;
  }

  // Raw network outputs, 1 x batch.
  RowVector Forward(const Matrix& inputs) const {
    Matrix activation = inputs;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      Matrix z = layers[l].weights * activation;
      z.colwise() += layers[l].bias;
      if (l + 1 < layers.size()) z = z.cwiseMax(Scalar(0));
      activation = std::move(z);
    }
    return activation;
  }

  // Loss of transformed outputs against `targets` (seconds), and its exact
  // gradient with respect to every parameter, written into `gradient`
  // (resized to match this network) when non-null. The batch MAPE is stored
  // in `mape` when non-null.
  double LossAndGradient(const Matrix& inputs, const RowVector& targets,
                         const OutputTransform& transform, LossFunction loss_fn,
                         Network* gradient, double* mape = nullptr) const {
    const Eigen::Index batch = inputs.cols();
    std::vector<Matrix> activations;
    activations.reserve(layers.size());
    activations.push_back(inputs);
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
      Matrix z = layers[l].weights * activations.back();
      z.colwise() += layers[l].bias;
      activations.push_back(z.cwiseMax(Scalar(0)));
    }
    RowVector output = layers.back().weights * activations.back();
    output.array() += layers.back().bias(0);

    const bool log_abs = loss_fn == LossFunction::kLogAbsolute;
    if (log_abs && transform.space != TargetSpace::kLog) {
      throw InputError("log-absolute loss needs the log target space");
    }
    double loss = 0.0;
    double ape = 0.0;
    RowVector delta(batch);
    const Scalar inv_n = Scalar(1) / static_cast<Scalar>(batch);
    for (Eigen::Index j = 0; j < batch; ++j) {
      const Scalar predicted = transform.Apply(output(j));
      const Scalar err = predicted - targets(j);
      const Scalar sign = err > 0 ? Scalar(1) : (err < 0 ? Scalar(-1) : Scalar(0));
      ape += std::abs(static_cast<double>(err)) / static_cast<double>(targets(j));
      if (log_abs) {
        // d/d output |output + log(scale) - log(target)|
        loss += std::abs(std::log(static_cast<double>(predicted)) -
                         std::log(static_cast<double>(targets(j))));
        delta(j) = sign * inv_n;
      } else {
        const Scalar d_out = transform.space == TargetSpace::kRaw
                                 ? static_cast<Scalar>(transform.scale)
                                 : predicted;
        delta(j) = sign / targets(j) * inv_n * d_out;
      }
    }
    ape /= static_cast<double>(batch);
    if (mape != nullptr) *mape = ape;
    loss = log_abs ? loss / static_cast<double>(batch) : ape;

    if (gradient != nullptr) {
      if (gradient->layers.size() != layers.size()) *gradient = Network(LayerSizes());
      Matrix d = delta;
      for (std::size_t l = layers.size(); l-- > 0;) {
        gradient->layers[l].weights.noalias() = d * activations[l].transpose();
        gradient->layers[l].bias = d.rowwise().sum();
        if (l > 0) {
          Matrix back = layers[l].weights.transpose() * d;
          d = (back.array() *
               (activations[l].array() > Scalar(0)).template cast<Scalar>())
                  .matrix();
        }
      }
    }
    return loss;
  }

  bool operator==(const Network& other) const { return layers == other.layers; }

  std::vector<DenseLayer<Scalar>> layers;
};

// Hyperparameters; defaults reproduce the reference training recipe.
struct TrainConfig {
  int hidden_layers = 8;
  int hidden_width = 1024;
  int epochs = 80;
  int batch_size = 512;
  double learning_rate = 5e-4;
  int decay_after_epochs = 40;  // learning rate drops after this many epochs
  double decayed_learning_rate = 1e-4;
  double weight_decay = 1e-4;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  TargetSpace target_space = TargetSpace::kRaw;
  FeatureTransform feature_transform = FeatureTransform::kIdentity;
  LossFunction loss = LossFunction::kMape;
  double output_scale = 1e-3;  // seconds per output unit
  bool evaluate_every_epoch = true;

  // Learning rate used during 1-based `epoch`.
  double LearningRateAt(int epoch) const {
    return epoch <= decay_after_epochs ? learning_rate : decayed_learning_rate;
  }

  bool operator==(const TrainConfig&) const = default;
};

// The reference recipe with log-space training: log1p features, log-time
// output and a mean absolute log error objective.
TrainConfig RobustTrainConfig();

struct MlpModel {
  OpKind operation = OpKind::kConv2d;
  std::vector<std::string> feature_names;
  Network<float> network;
  std::vector<double> input_mean;
  std::vector<double> input_std;  // strictly positive
  FeatureTransform feature_transform = FeatureTransform::kIdentity;
  OutputTransform transform;
  TrainConfig hyperparameters;
  double train_mape = 0;
  double test_mape = 0;

  bool operator==(const MlpModel&) const = default;
};

// Predicted seconds for one feature vector (op params then GPU features).
// Throws InputError on a dimension mismatch.
double Forward(const MlpModel& model, std::span<const double> features);

// Predictions for many samples at once.
std::vector<double> Predict(const MlpModel& model,
                            std::span<const Sample> samples);

// (1/n) sum |predicted - measured| / measured. Throws InputError for empty
// input or a non-positive measurement.
double Mape(std::span<const double> predicted,
            std::span<const double> measured);

double Evaluate(const MlpModel& model, std::span<const Sample> samples);
double Evaluate(const MlpModel& model, const Dataset& dataset);

struct Normalization {
  std::vector<double> mean;
  std::vector<double> std;  // population std; constant columns get 1
};

Normalization ComputeNormalization(
    std::span<const Sample> samples,
    FeatureTransform transform = FeatureTransform::kIdentity);

struct DatasetSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Partitions sample indices so that every configuration id falls wholly in
// one side; `train_fraction` of the distinct configurations go to train.
DatasetSplit SplitByConfiguration(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed);

struct EpochStats {
  int epoch = 0;  // 1-based
  double learning_rate = 0;
  double train_mape = 0;  // running mean over the epoch's mini-batches
  double test_mape = 0;   // NaN when not evaluated
};

struct TrainResult {
  MlpModel model;
  std::vector<EpochStats> history;
  double train_mape = 0;
  double test_mape = 0;
  DatasetSplit split;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Adam with L2 weight decay on the MAPE loss, step learning-rate schedule,
// seeded shuffling and initialisation. Throws InputError for an empty
// dataset, non-positive targets, or fewer training samples than one batch.
TrainResult Train(const Dataset& dataset, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

struct SweepPoint {
  int hidden_layers = 0;
  int hidden_width = 0;
  double train_mape = 0;
  double test_mape = 0;
};

// Trains one model per (layers, width) pair with otherwise identical
// settings and records the resulting errors.
std::vector<SweepPoint> ArchitectureSweep(const Dataset& dataset,
                                          std::span<const int> hidden_layers,
                                          std::span<const int> hidden_widths,
                                          const TrainConfig& base);

}  // namespace wavecast

#endif  // WAVECAST_MLP_H_
