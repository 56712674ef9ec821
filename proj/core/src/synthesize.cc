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

#include "wavecast/synthesize.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "wavecast/error.h"
#include "wavecast/oracle.h"

namespace wavecast {
namespace {

using nlohmann::json;

constexpr int kElementwiseBlock = 256;

bool IsOracleOp(const std::string& name) {
  for (OpKind op : AllOpKinds()) {
    if (ToString(op) == name) return true;
  }
  return false;
}

std::vector<double> OracleParams(const OpTemplate& op, OpKind kind,
                                 std::size_t index) {
  std::vector<double> params;
  for (const std::string& feature : OpFeatureNames(kind)) {
    auto it = op.op_params.find(feature);
    if (it == op.op_params.end()) {
      throw InputError("template operation " + std::to_string(index) + " (" +
                       op.op_name + ") is missing parameter '" + feature + "'");
    }
    params.push_back(it->second);
  }
  return params;
}

KernelLaunchConfig GeneratedLaunch(double dram_bytes) {
  KernelLaunchConfig launch;
  launch.block_count = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::ceil(dram_bytes / 65536.0)), 1, 1 << 20);
  launch.threads_per_block = 256;
  launch.registers_per_thread = 64;
  launch.shared_mem_per_block = 0;
  return launch;
}

class Jitter {
 public:
  Jitter(std::uint64_t seed, double sigma) : rng_(seed), sigma_(sigma) {}
  double Apply(double t) {
    if (sigma_ == 0.0) return t;
    return t * std::exp(sigma_ * normal_(rng_));
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  double sigma_;
};

// conv2d, lstm, bmm, linear: the oracle's operation time split into one
// forward and two backward kernels.
OperationRecord SynthesizeOracleOp(const OpTemplate& op, std::size_t index,
                                   const GpuSpec& origin, Jitter& jitter,
                                   const SynthesisOptions& options) {
  const OpKind kind = ParseOpKind(op.op_name);
  const std::vector<double> params = OracleParams(op, kind, index);
  const WorkEstimate work = EstimateWork(kind, params);
  const double total = QuantizeTime(jitter.Apply(AnalyticOpTime(kind, params, origin)));
  const double third = QuantizeTime(total / 3.0);
  const double parts[3] = {third, third, total - 2.0 * third};
  const char* suffixes[3] = {"_fwd", "_bwd_data", "_bwd_weight"};

  OperationRecord record;
  record.op_name = op.op_name;
  record.op_params = op.op_params;
  for (int i = 0; i < 3; ++i) {
    KernelRecord k;
    k.name = "oracle_" + op.op_name + suffixes[i];
    k.launch = GeneratedLaunch(work.dram_bytes / 3.0);
    k.measured_time = parts[i];
    if (options.attach_metrics) {
      k.metrics = KernelMetrics{work.flops / 3.0, work.dram_bytes / 3.0};
    }
    record.kernels.push_back(std::move(k));
  }
  record.forward_time = parts[0];
  record.backward_time = parts[1] + parts[2];
  return record;
}

OperationRecord SynthesizeKernelOp(const OpTemplate& op, const GpuSpec& origin,
                                   Jitter& jitter,
                                   const SynthesisOptions& options) {
  OperationRecord record;
  record.op_name = op.op_name;
  record.op_params = op.op_params;
  double forward = 0.0;
  double backward = 0.0;
  bool has_backward = false;
  for (const KernelTemplate& kt : op.kernels) {
    KernelRecord k;
    k.name = kt.name;
    k.launch = kt.launch;
    k.measured_time = QuantizeTime(jitter.Apply(
        AnalyticKernelTime(kt.flops, kt.dram_bytes, kt.launch, origin)));
    if (options.attach_metrics) {
      k.metrics = KernelMetrics{kt.flops, kt.dram_bytes};
    }
    if (kt.pass == Pass::kForward) {
      forward += k.measured_time;
    } else {
      backward += k.measured_time;
      has_backward = true;
    }
    record.kernels.push_back(std::move(k));
  }
  if (forward == 0.0) {
    // Backward-only ops (e.g. the optimizer step) report their time as
    // the forward pass.
    forward = backward;
    backward = 0.0;
    has_backward = false;
  }
  record.forward_time = forward;
  if (has_backward) record.backward_time = backward;
  return record;
}

double OutputSize(double image, double kernel, double padding, double stride) {
  return std::floor((image + 2 * padding - kernel) / stride) + 1;
}

OpTemplate Conv(int batch, int in, int out, int kernel, int pad, int stride,
                int image) {
  return {"conv2d",
          {{"batch", batch},
           {"in_channels", in},
           {"out_channels", out},
           {"kernel_size", kernel},
           {"padding", pad},
           {"stride", stride},
           {"image_size", image},
           {"bias", 0}},
          {}};
}

OpTemplate Linear(int batch, int in, int out) {
  return {"linear",
          {{"batch", batch},
           {"in_features", in},
           {"out_features", out},
           {"bias", 1}},
          {}};
}

OpTemplate Bmm(int batch, int left, int middle, int right) {
  return {"bmm",
          {{"batch", batch}, {"left", left}, {"middle", middle}, {"right", right}},
          {}};
}

// Elementwise op with a forward kernel and a backward kernel.
OpTemplate Elementwise(const std::string& name, double elements, double flops,
                       double fwd_bytes, double bwd_bytes) {
  return {name,
          {},
          {ElementwiseKernel(name + "_fwd_kernel", elements, flops, fwd_bytes),
           ElementwiseKernel(name + "_bwd_kernel", elements, flops, bwd_bytes,
                             Pass::kBackward)}};
}

// Optimizer update over `parameters` weights: read weight, grad, two moments,
// write weight and moments.
OpTemplate AdamStep(double parameters) {
  return {"adam_step",
          {},
          {ElementwiseKernel("adam_update_kernel", parameters, 12, 28,
                             Pass::kBackward)}};
}

Pass ParsePass(const std::string& s, const std::string& where) {
  if (s == "forward") return Pass::kForward;
  if (s == "backward") return Pass::kBackward;
  throw ParseError(where + ": pass must be 'forward' or 'backward'");
}

template <typename T>
T Required(const json& object, const char* key, const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

double QuantizeTime(double seconds) {
  const double scaled = std::round(std::ldexp(seconds, -kTimeGridExponent));
  return std::ldexp(std::max(scaled, 1.0), kTimeGridExponent);
}

KernelTemplate ElementwiseKernel(std::string name, double elements,
                                 double flops_per_element,
                                 double bytes_per_element, Pass pass) {
  KernelTemplate k;
  k.name = std::move(name);
  k.launch.block_count = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(elements / kElementwiseBlock)));
  k.launch.threads_per_block = kElementwiseBlock;
  k.launch.registers_per_thread = 32;
  k.launch.shared_mem_per_block = 0;
  k.flops = flops_per_element * elements;
  k.dram_bytes = bytes_per_element * elements;
  k.pass = pass;
  return k;
}

IterationTrace SynthesizeTrace(const WorkloadTemplate& workload,
                               const GpuSpec& origin, std::uint64_t seed,
                               const SynthesisOptions& options) {
  if (workload.operations.empty()) {
    throw InputError("workload '" + workload.model_name + "' has no operations");
  }
  if (workload.batch_size < 1) throw InputError("batch_size must be >= 1");
  Jitter jitter(seed, options.noise);
  IterationTrace trace;
  trace.origin_gpu = origin.name;
  trace.model_name = workload.model_name;
  trace.batch_size = workload.batch_size;
  for (std::size_t i = 0; i < workload.operations.size(); ++i) {
    const OpTemplate& op = workload.operations[i];
    if (IsOracleOp(op.op_name)) {
      trace.operations.push_back(
          SynthesizeOracleOp(op, i, origin, jitter, options));
    } else if (!op.kernels.empty()) {
      trace.operations.push_back(SynthesizeKernelOp(op, origin, jitter, options));
    } else {
      throw InputError("template operation " + std::to_string(i) + " ('" +
                       op.op_name +
                       "') is unknown: it is not conv2d, lstm, bmm or linear "
                       "and lists no kernels");
    }
  }
  return trace;
}

WorkloadTemplate ResnetLikeTemplate(int batch_size) {
  WorkloadTemplate w;
  w.model_name = "resnet-like";
  w.batch_size = batch_size;
  const double b = batch_size;
  double image = 224;
  auto add_bn_relu = [&](int channels) {
    const double elements = b * channels * image * image;
    w.operations.push_back(Elementwise("batch_norm", elements, 8, 8, 16));
    w.operations.push_back(Elementwise("relu", elements, 1, 8, 12));
  };

  w.operations.push_back(Conv(batch_size, 3, 64, 7, 3, 2, 224));
  image = OutputSize(224, 7, 3, 2);
  add_bn_relu(64);
  w.operations.push_back(Elementwise("max_pool2d", b * 64 * image * image, 9, 10, 12));
  image = OutputSize(image, 3, 1, 2);

  double parameters = 3 * 64 * 49;
  const int widths[4] = {64, 128, 256, 512};
  int in = 64;
  for (int stage = 0; stage < 4; ++stage) {
    const int out = widths[stage];
    const int stride = stage == 0 ? 1 : 2;
    w.operations.push_back(Conv(batch_size, in, out, 3, 1, stride,
                                static_cast<int>(image)));
    image = OutputSize(image, 3, 1, stride);
    add_bn_relu(out);
    w.operations.push_back(Conv(batch_size, out, out, 3, 1, 1,
                                static_cast<int>(image)));
    add_bn_relu(out);
    w.operations.push_back(
        Elementwise("add", b * out * image * image, 1, 12, 12));
    parameters += 9.0 * in * out + 9.0 * out * out;
    in = out;
  }
  w.operations.push_back(
      Elementwise("adaptive_avg_pool2d", b * 512 * image * image, 1, 4, 8));
  w.operations.push_back(Linear(batch_size, 512, 1000));
  w.operations.push_back(Elementwise("cross_entropy", b * 1000, 6, 8, 8));
  parameters += 512.0 * 1000;
  w.operations.push_back(AdamStep(parameters));
  return w;
}

WorkloadTemplate TransformerLikeTemplate(int batch_size) {
  constexpr int kSeq = 128;
  constexpr int kModel = 512;
  constexpr int kHeads = 8;
  constexpr int kFfn = 2048;
  constexpr int kLayers = 2;
  WorkloadTemplate w;
  w.model_name = "transformer-like";
  w.batch_size = batch_size;
  const int tokens = batch_size * kSeq;
  const double activations = static_cast<double>(tokens) * kModel;
  for (int layer = 0; layer < kLayers; ++layer) {
    w.operations.push_back(Linear(tokens, kModel, 3 * kModel));
    w.operations.push_back(Bmm(batch_size * kHeads, kSeq, kModel / kHeads, kSeq));
    w.operations.push_back(Elementwise(
        "softmax", static_cast<double>(batch_size) * kHeads * kSeq * kSeq, 5, 8, 12));
    w.operations.push_back(Bmm(batch_size * kHeads, kSeq, kSeq, kModel / kHeads));
    w.operations.push_back(Linear(tokens, kModel, kModel));
    w.operations.push_back(Elementwise("add", activations, 1, 12, 12));
    w.operations.push_back(Elementwise("layer_norm", activations, 8, 8, 16));
    w.operations.push_back(Linear(tokens, kModel, kFfn));
    w.operations.push_back(Elementwise("gelu", activations * 4, 10, 8, 12));
    w.operations.push_back(Linear(tokens, kFfn, kModel));
    w.operations.push_back(Elementwise("add", activations, 1, 12, 12));
    w.operations.push_back(Elementwise("layer_norm", activations, 8, 8, 16));
  }
  const double parameters =
      kLayers * (4.0 * kModel * kModel + 2.0 * kModel * kFfn);
  w.operations.push_back(AdamStep(parameters));
  return w;
}

WorkloadTemplate ElementwiseTemplate(int batch_size) {
  WorkloadTemplate w;
  w.model_name = "elementwise";
  w.batch_size = batch_size;
  const double b = batch_size;
  w.operations.push_back(Elementwise("batch_norm", b * 64 * 112 * 112, 8, 8, 16));
  w.operations.push_back(Elementwise("relu", b * 64 * 112 * 112, 1, 8, 12));
  w.operations.push_back(Elementwise("max_pool2d", b * 64 * 56 * 56, 9, 10, 12));
  w.operations.push_back(Elementwise("softmax", b * 8 * 128 * 128, 5, 8, 12));
  w.operations.push_back(Elementwise("gelu", b * 128 * 2048, 10, 8, 12));
  w.operations.push_back(Elementwise("add", b * 256 * 28 * 28, 1, 12, 12));
  w.operations.push_back(AdamStep(11.7e6));
  return w;
}

std::vector<std::string> BuiltinTemplateNames() {
  return {"elementwise", "resnet-like", "transformer-like"};
}

WorkloadTemplate BuiltinTemplate(std::string_view name, int batch_size) {
  if (name == "resnet-like") return ResnetLikeTemplate(batch_size);
  if (name == "transformer-like") return TransformerLikeTemplate(batch_size);
  if (name == "elementwise") return ElementwiseTemplate(batch_size);
  std::string known;
  for (const std::string& n : BuiltinTemplateNames()) {
    known += (known.empty() ? "" : ", ") + n;
  }
  throw InputError("unknown template '" + std::string(name) +
                   "' (built-in: " + known + ")");
}

WorkloadTemplate ParseWorkloadTemplate(std::string_view document,
                                       std::string_view source) {
  const std::string src(source);
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(src + ": " + e.what());
  }
  if (!root.is_object()) throw ParseError(src + ": expected an object");
  WorkloadTemplate w;
  w.model_name = Required<std::string>(root, "model_name", src);
  w.batch_size = Required<int>(root, "batch_size", src);
  const json ops = Required<json>(root, "operations", src);
  if (!ops.is_array()) throw ParseError(src + ": operations must be a list");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const std::string where = src + ".operations[" + std::to_string(i) + "]";
    OpTemplate op;
    op.op_name = Required<std::string>(ops[i], "op_name", where);
    if (ops[i].contains("op_params")) {
      for (const auto& [key, value] : ops[i]["op_params"].items()) {
        if (value.is_boolean()) {
          op.op_params[key] = value.get<bool>() ? 1.0 : 0.0;
        } else if (value.is_number()) {
          op.op_params[key] = value.get<double>();
        } else {
          throw ParseError(where + ": op_params." + key + " must be numeric");
        }
      }
    }
    if (ops[i].contains("kernels")) {
      const json& kernels = ops[i]["kernels"];
      for (std::size_t k = 0; k < kernels.size(); ++k) {
        const std::string kwhere = where + ".kernels[" + std::to_string(k) + "]";
        KernelTemplate kt;
        kt.name = Required<std::string>(kernels[k], "name", kwhere);
        kt.launch.block_count =
            Required<std::int64_t>(kernels[k], "block_count", kwhere);
        kt.launch.threads_per_block =
            Required<int>(kernels[k], "threads_per_block", kwhere);
        kt.launch.registers_per_thread =
            Required<int>(kernels[k], "registers_per_thread", kwhere);
        kt.launch.shared_mem_per_block =
            Required<int>(kernels[k], "shared_mem_bytes", kwhere);
        kt.flops = Required<double>(kernels[k], "flops", kwhere);
        kt.dram_bytes = Required<double>(kernels[k], "dram_bytes", kwhere);
        kt.pass = kernels[k].contains("pass")
                      ? ParsePass(Required<std::string>(kernels[k], "pass", kwhere),
                                  kwhere)
                      : Pass::kForward;
        op.kernels.push_back(std::move(kt));
      }
    }
    w.operations.push_back(std::move(op));
  }
  return w;
}

WorkloadTemplate LoadWorkloadTemplateFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open template " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseWorkloadTemplate(buffer.str(), path.string());
}

}  // namespace wavecast
