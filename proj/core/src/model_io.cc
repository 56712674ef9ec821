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

#include "wavecast/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wavecast/error.h"

namespace wavecast {
namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "model files are written in little-endian byte order");

constexpr char kMagic[8] = {'W', 'C', 'M', 'L', 'P', '\0', '\0', '\1'};

std::uint64_t Fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename T>
void Append(std::string& out, const T& value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  Reader(std::string_view bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  template <typename T>
  T Read() {
    T value;
    std::memcpy(&value, Take(sizeof(T)).data(), sizeof(T));
    return value;
  }

  std::string_view Take(std::size_t n) {
    if (n > bytes_.size() - offset_) {
      throw ParseError(source_ + ": model file is truncated or corrupt");
    }
    std::string_view s = bytes_.substr(offset_, n);
    offset_ += n;
    return s;
  }

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }

 private:
  std::string_view bytes_;
  std::string source_;
  std::size_t offset_ = 0;
};

json ConfigToJson(const TrainConfig& c) {
  return {{"hidden_layers", c.hidden_layers},
          {"hidden_width", c.hidden_width},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"decay_after_epochs", c.decay_after_epochs},
          {"decayed_learning_rate", c.decayed_learning_rate},
          {"weight_decay", c.weight_decay},
          {"adam_beta1", c.adam_beta1},
          {"adam_beta2", c.adam_beta2},
          {"adam_epsilon", c.adam_epsilon},
          {"train_fraction", c.train_fraction},
          {"seed", c.seed},
          {"target_space", ToString(c.target_space)},
          {"feature_transform", ToString(c.feature_transform)},
          {"loss", ToString(c.loss)},
          {"output_scale", c.output_scale},
          {"evaluate_every_epoch", c.evaluate_every_epoch}};
}

TrainConfig ConfigFromJson(const json& j) {
  TrainConfig c;
  c.hidden_layers = j.at("hidden_layers").get<int>();
  c.hidden_width = j.at("hidden_width").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.decay_after_epochs = j.at("decay_after_epochs").get<int>();
  c.decayed_learning_rate = j.at("decayed_learning_rate").get<double>();
  c.weight_decay = j.at("weight_decay").get<double>();
  c.adam_beta1 = j.at("adam_beta1").get<double>();
  c.adam_beta2 = j.at("adam_beta2").get<double>();
  c.adam_epsilon = j.at("adam_epsilon").get<double>();
  c.train_fraction = j.at("train_fraction").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.target_space = ParseTargetSpace(j.at("target_space").get<std::string>());
  c.feature_transform =
      ParseFeatureTransform(j.at("feature_transform").get<std::string>());
  c.loss = ParseLossFunction(j.at("loss").get<std::string>());
  c.output_scale = j.at("output_scale").get<double>();
  c.evaluate_every_epoch = j.at("evaluate_every_epoch").get<bool>();
  return c;
}

}  // namespace

std::string SerializeModel(const MlpModel& model) {
  json header;
  header["operation"] = ToString(model.operation);
  header["feature_names"] = model.feature_names;
  header["layer_sizes"] = model.network.LayerSizes();
  header["input_mean"] = model.input_mean;
  header["input_std"] = model.input_std;
  header["feature_transform"] = ToString(model.feature_transform);
  header["output"] = {{"space", ToString(model.transform.space)},
                      {"scale", model.transform.scale}};
  header["hyperparameters"] = ConfigToJson(model.hyperparameters);
  header["train_mape"] = model.train_mape;
  header["test_mape"] = model.test_mape;
  const std::string text = header.dump();

  std::string out(kMagic, sizeof(kMagic));
  Append(out, kModelFormatVersion);
  Append(out, static_cast<std::uint64_t>(text.size()));
  out += text;
  for (const DenseLayer<float>& layer : model.network.layers) {
    out.append(reinterpret_cast<const char*>(layer.weights.data()),
               sizeof(float) * layer.weights.size());
    out.append(reinterpret_cast<const char*>(layer.bias.data()),
               sizeof(float) * layer.bias.size());
  }
  Append(out, Fnv1a(out));
  return out;
}

MlpModel DeserializeModel(std::string_view bytes, std::string_view source) {
  const std::string src(source);
  Reader reader(bytes, src);
  if (reader.Take(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    throw ParseError(src + ": not a wavecast model file");
  }
  const auto version = reader.Read<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw VersionError(src + ": model format version " + std::to_string(version) +
                       " is not supported (this build reads version " +
                       std::to_string(kModelFormatVersion) + ")");
  }
  if (bytes.size() < sizeof(std::uint64_t)) {
    throw ParseError(src + ": model file is truncated or corrupt");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - sizeof(std::uint64_t));
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + body.size(), sizeof(stored));
  if (stored != Fnv1a(body)) {
    throw ParseError(src + ": model file is truncated or corrupt (checksum mismatch)");
  }

  const auto header_size = reader.Read<std::uint64_t>();
  MlpModel model;
  std::vector<int> sizes;
  try {
    const json header = json::parse(reader.Take(header_size));
    model.operation = ParseOpKind(header.at("operation").get<std::string>());
    model.feature_names = header.at("feature_names").get<std::vector<std::string>>();
    sizes = header.at("layer_sizes").get<std::vector<int>>();
    model.input_mean = header.at("input_mean").get<std::vector<double>>();
    model.input_std = header.at("input_std").get<std::vector<double>>();
    model.feature_transform =
        ParseFeatureTransform(header.at("feature_transform").get<std::string>());
    model.transform.space =
        ParseTargetSpace(header.at("output").at("space").get<std::string>());
    model.transform.scale = header.at("output").at("scale").get<double>();
    model.hyperparameters = ConfigFromJson(header.at("hyperparameters"));
    model.train_mape = header.at("train_mape").get<double>();
    model.test_mape = header.at("test_mape").get<double>();
  } catch (const json::exception& e) {
    throw ParseError(src + ": malformed model header: " + e.what());
  }
  if (sizes.size() < 2 || sizes.front() != static_cast<int>(model.feature_names.size()) ||
      model.input_mean.size() != model.feature_names.size() ||
      model.input_std.size() != model.feature_names.size()) {
    throw ParseError(src + ": inconsistent model header");
  }
  model.network = Network<float>(sizes);
  for (DenseLayer<float>& layer : model.network.layers) {
    const std::size_t w = sizeof(float) * layer.weights.size();
    std::memcpy(layer.weights.data(), reader.Take(w).data(), w);
    const std::size_t b = sizeof(float) * layer.bias.size();
    std::memcpy(layer.bias.data(), reader.Take(b).data(), b);
  }
  if (reader.remaining() != sizeof(std::uint64_t)) {
    throw ParseError(src + ": model file has trailing data");
  }
  return model;
}

void SaveModel(const MlpModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write model file " + path.string());
  const std::string bytes = SerializeModel(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing model file " + path.string());
}

MlpModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return DeserializeModel(buffer.str(), path.string());
}

}  // namespace wavecast
