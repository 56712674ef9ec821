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

#include "wavecast/trace.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wavecast/error.h"

namespace wavecast {
namespace {

using nlohmann::json;

constexpr double kMsPerSecond = 1000.0;

// Walks a JSON object, tracking the path for error messages and rejecting
// fields the schema does not define.
class ObjectReader {
 public:
  ObjectReader(const json& object, std::string path,
               std::initializer_list<std::string_view> allowed)
      : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) Fail("expected an object");
    for (const auto& [key, value] : object_.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        Fail("unknown field '" + key + "'");
      }
    }
  }

  bool Has(std::string_view key) const {
    return object_.contains(std::string(key));
  }

  const json& Get(std::string_view key) const {
    auto it = object_.find(std::string(key));
    if (it == object_.end()) Fail("missing field '" + std::string(key) + "'");
    return *it;
  }

  std::string String(std::string_view key) const {
    const json& v = Get(key);
    if (!v.is_string()) Fail("field '" + std::string(key) + "' must be a string");
    return v.get<std::string>();
  }

  double Number(std::string_view key) const {
    const json& v = Get(key);
    if (!v.is_number()) Fail("field '" + std::string(key) + "' must be a number");
    return v.get<double>();
  }

  std::int64_t Integer(std::string_view key) const {
    const json& v = Get(key);
    if (!v.is_number_integer()) {
      Fail("field '" + std::string(key) + "' must be an integer");
    }
    return v.get<std::int64_t>();
  }

  int Int(std::string_view key) const {
    const std::int64_t v = Integer(key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      Fail("field '" + std::string(key) + "' is out of range");
    }
    return static_cast<int>(v);
  }

  const json& Array(std::string_view key) const {
    const json& v = Get(key);
    if (!v.is_array()) Fail("field '" + std::string(key) + "' must be a list");
    return v;
  }

  const std::string& path() const { return path_; }

  [[noreturn]] void Fail(const std::string& what) const {
    throw ParseError(path_ + ": " + what);
  }

 private:
  const json& object_;
  std::string path_;
};

KernelRecord ParseKernel(const json& node, const std::string& path) {
  ObjectReader r(node, path,
                 {"name", "block_count", "threads_per_block",
                  "registers_per_thread", "shared_mem_bytes", "time_ms",
                  "metrics"});
  KernelRecord k;
  k.name = r.String("name");
  k.launch.block_count = r.Integer("block_count");
  k.launch.threads_per_block = r.Int("threads_per_block");
  k.launch.registers_per_thread = r.Int("registers_per_thread");
  k.launch.shared_mem_per_block = r.Int("shared_mem_bytes");
  k.measured_time = r.Number("time_ms") / kMsPerSecond;
  if (r.Has("metrics")) {
    ObjectReader m(r.Get("metrics"), path + ".metrics", {"flops", "dram_bytes"});
    k.metrics = KernelMetrics{m.Number("flops"), m.Number("dram_bytes")};
  }
  return k;
}

OperationRecord ParseOperation(const json& node, const std::string& path) {
  ObjectReader r(node, path,
                 {"op_name", "op_params", "forward_time_ms",
                  "backward_time_ms", "kernels"});
  OperationRecord op;
  op.op_name = r.String("op_name");
  if (r.Has("op_params")) {
    const json& params = r.Get("op_params");
    if (!params.is_object()) r.Fail("field 'op_params' must be an object");
    for (const auto& [key, value] : params.items()) {
      if (value.is_boolean()) {
        op.op_params[key] = value.get<bool>() ? 1.0 : 0.0;
      } else if (value.is_number()) {
        op.op_params[key] = value.get<double>();
      } else {
        r.Fail("op_params." + key + " must be a number or a boolean");
      }
    }
  }
  op.forward_time = r.Number("forward_time_ms") / kMsPerSecond;
  if (r.Has("backward_time_ms")) {
    op.backward_time = r.Number("backward_time_ms") / kMsPerSecond;
  }
  const json& kernels = r.Array("kernels");
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    op.kernels.push_back(
        ParseKernel(kernels[i], path + ".kernels[" + std::to_string(i) + "]"));
  }
  return op;
}

json KernelToJson(const KernelRecord& k) {
  json j;
  j["name"] = k.name;
  j["block_count"] = k.launch.block_count;
  j["threads_per_block"] = k.launch.threads_per_block;
  j["registers_per_thread"] = k.launch.registers_per_thread;
  j["shared_mem_bytes"] = k.launch.shared_mem_per_block;
  j["time_ms"] = k.measured_time * kMsPerSecond;
  if (k.metrics) {
    j["metrics"] = {{"flops", k.metrics->flop_count},
                    {"dram_bytes", k.metrics->dram_bytes}};
  }
  return j;
}

}  // namespace

double OperationRecord::MeasuredTime() const {
  return forward_time + backward_time.value_or(0.0);
}

double IterationTrace::MeasuredIterationTime() const {
  double total = 0.0;
  for (const OperationRecord& op : operations) total += op.MeasuredTime();
  return total;
}

void ValidateTrace(const IterationTrace& trace, const GpuRegistry& registry,
                   const TraceValidationOptions& options) {
  std::vector<std::string> problems;
  if (trace.schema_version != kTraceSchemaVersion) {
    problems.push_back("schema_version " + std::to_string(trace.schema_version) +
                       " is not supported (expected " +
                       std::to_string(kTraceSchemaVersion) + ")");
  }
  if (registry.Find(trace.origin_gpu) == nullptr) {
    std::string known;
    for (const std::string& n : registry.Names()) {
      known += (known.empty() ? "" : ", ") + n;
    }
    problems.push_back("origin_gpu '" + trace.origin_gpu +
                       "' is not in the registry (known: " + known + ")");
  }
  if (trace.batch_size < 1) problems.push_back("batch_size must be >= 1");
  if (trace.operations.empty()) problems.push_back("trace has no operations");

  for (std::size_t i = 0; i < trace.operations.size(); ++i) {
    const OperationRecord& op = trace.operations[i];
    const std::string where =
        "operation " + std::to_string(i) + " ('" + op.op_name + "'): ";
    if (op.op_name.empty()) problems.push_back(where + "op_name is empty");
    if (!(op.forward_time > 0) || !std::isfinite(op.forward_time)) {
      problems.push_back(where + "forward_time must be > 0");
    }
    if (op.backward_time &&
        (!(*op.backward_time >= 0) || !std::isfinite(*op.backward_time))) {
      problems.push_back(where + "backward_time must be >= 0");
    }
    double kernel_sum = 0.0;
    for (std::size_t k = 0; k < op.kernels.size(); ++k) {
      const KernelRecord& kr = op.kernels[k];
      const std::string kwhere = where + "kernel " + std::to_string(k) + " ('" +
                                 kr.name + "'): ";
      if (!(kr.measured_time > 0) || !std::isfinite(kr.measured_time)) {
        problems.push_back(kwhere + "time must be > 0");
      }
      try {
        Validate(kr.launch);
      } catch (const InputError& e) {
        problems.push_back(kwhere + e.what());
      }
      if (kr.metrics) {
        if (!(kr.metrics->flop_count >= 0)) {
          problems.push_back(kwhere + "metrics.flops must be >= 0");
        }
        if (!(kr.metrics->dram_bytes > 0)) {
          problems.push_back(kwhere + "metrics.dram_bytes must be > 0");
        }
      }
      kernel_sum += kr.measured_time;
    }
    const double wall = op.MeasuredTime();
    if (kernel_sum > wall * (1.0 + options.kernel_time_slack)) {
      std::ostringstream os;
      os << where << "kernel times sum to " << kernel_sum * kMsPerSecond
         << " ms, more than the operation's " << wall * kMsPerSecond
         << " ms plus " << options.kernel_time_slack * 100 << "% slack";
      problems.push_back(os.str());
    }
  }

  if (!problems.empty()) {
    std::string message = "invalid trace:";
    for (const std::string& p : problems) message += "\n  " + p;
    throw InputError(message);
  }
}

IterationTrace ParseTrace(std::string_view document, const GpuRegistry& registry,
                          const TraceValidationOptions& options) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("trace: ") + e.what());
  }
  ObjectReader r(root, "trace",
                 {"schema_version", "origin_gpu", "model_name", "batch_size",
                  "operations"});
  IterationTrace trace;
  trace.schema_version = r.Int("schema_version");
  if (trace.schema_version != kTraceSchemaVersion) {
    r.Fail("schema_version " + std::to_string(trace.schema_version) +
           " is not supported (expected " + std::to_string(kTraceSchemaVersion) +
           ")");
  }
  trace.origin_gpu = r.String("origin_gpu");
  trace.model_name = r.String("model_name");
  trace.batch_size = r.Int("batch_size");
  const json& ops = r.Array("operations");
  for (std::size_t i = 0; i < ops.size(); ++i) {
    trace.operations.push_back(
        ParseOperation(ops[i], "trace.operations[" + std::to_string(i) + "]"));
  }
  ValidateTrace(trace, registry, options);
  return trace;
}

IterationTrace LoadTraceFile(const std::filesystem::path& path,
                             const GpuRegistry& registry,
                             const TraceValidationOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseTrace(buffer.str(), registry, options);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string SerializeTrace(const IterationTrace& trace) {
  json root;
  root["schema_version"] = trace.schema_version;
  root["origin_gpu"] = trace.origin_gpu;
  root["model_name"] = trace.model_name;
  root["batch_size"] = trace.batch_size;
  json ops = json::array();
  for (const OperationRecord& op : trace.operations) {
    json j;
    j["op_name"] = op.op_name;
    j["op_params"] = json::object();
    for (const auto& [key, value] : op.op_params) j["op_params"][key] = value;
    j["forward_time_ms"] = op.forward_time * kMsPerSecond;
    if (op.backward_time) j["backward_time_ms"] = *op.backward_time * kMsPerSecond;
    json kernels = json::array();
    for (const KernelRecord& k : op.kernels) kernels.push_back(KernelToJson(k));
    j["kernels"] = std::move(kernels);
    ops.push_back(std::move(j));
  }
  root["operations"] = std::move(ops);
  return root.dump(2) + "\n";
}

void SaveTraceFile(const IterationTrace& trace,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write trace file " + path.string());
  out << SerializeTrace(trace);
}

KernelKey KeyOf(const KernelRecord& kernel) {
  return {kernel.name, kernel.launch.block_count,
          kernel.launch.threads_per_block};
}

std::vector<KernelKey> SignificantKernels(const IterationTrace& trace,
                                          double percentile) {
  if (!(percentile >= 0 && percentile <= 100)) {
    throw InputError("percentile must lie in [0, 100]");
  }
  std::vector<double> times;
  for (const OperationRecord& op : trace.operations) {
    for (const KernelRecord& k : op.kernels) times.push_back(k.measured_time);
  }
  if (times.empty()) return {};
  std::sort(times.begin(), times.end());
  const double rank = percentile * static_cast<double>(times.size()) / 100.0;
  const std::size_t index = std::min(
      times.size() - 1, static_cast<std::size_t>(std::floor(rank + 1e-9)));
  const double threshold = times[index];

  std::set<KernelKey> keys;
  for (const OperationRecord& op : trace.operations) {
    for (const KernelRecord& k : op.kernels) {
      if (k.measured_time >= threshold) keys.insert(KeyOf(k));
    }
  }
  return {keys.begin(), keys.end()};
}

}  // namespace wavecast
