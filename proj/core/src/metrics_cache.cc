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

#include "wavecast/metrics_cache.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wavecast/error.h"

namespace wavecast {
namespace {

using nlohmann::json;

const json& Field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object()) throw ParseError(where + ": expected an object");
  auto it = object.find(key);
  if (it == object.end()) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return *it;
}

double NumberField(const json& object, const char* key, const std::string& where) {
  const json& v = Field(object, key, where);
  if (!v.is_number()) {
    throw ParseError(where + ": field '" + key + "' must be a number");
  }
  return v.get<double>();
}

}  // namespace

void MetricsCache::Insert(const KernelKey& key, const KernelMetrics& metrics) {
  entries_[key] = metrics;
}

std::optional<KernelMetrics> MetricsCache::Lookup(const KernelKey& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<KernelMetrics> MetricsCache::Lookup(
    const KernelRecord& kernel) const {
  return Lookup(KeyOf(kernel));
}

void MetricsCache::MergeFrom(const MetricsCache& other) {
  for (const auto& [key, metrics] : other.entries_) entries_[key] = metrics;
}

void MetricsCache::MergeFrom(const IterationTrace& trace) {
  for (const OperationRecord& op : trace.operations) {
    for (const KernelRecord& k : op.kernels) {
      if (k.metrics) entries_[KeyOf(k)] = *k.metrics;
    }
  }
}

MetricsCache ParseMetricsCache(std::string_view document,
                               std::string_view source) {
  const std::string src(source);
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(src + ": " + e.what());
  }
  if (!root.is_array()) throw ParseError(src + ": expected a list of records");
  MetricsCache cache;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string where = src + "[" + std::to_string(i) + "]";
    const json& key_node = Field(root[i], "kernel_key", where);
    const std::string kwhere = where + ".kernel_key";
    const json& name = Field(key_node, "name", kwhere);
    const json& blocks = Field(key_node, "block_count", kwhere);
    const json& threads = Field(key_node, "threads_per_block", kwhere);
    if (!name.is_string() || !blocks.is_number_integer() ||
        !threads.is_number_integer()) {
      throw ParseError(kwhere +
                       ": name must be a string, block_count and "
                       "threads_per_block integers");
    }
    const json& m = Field(root[i], "metrics", where);
    const std::string mwhere = where + ".metrics";
    KernelMetrics metrics{NumberField(m, "flops", mwhere),
                          NumberField(m, "dram_bytes", mwhere)};
    if (!(metrics.flop_count >= 0)) {
      throw ParseError(mwhere + ": flops must be >= 0");
    }
    if (!(metrics.dram_bytes > 0)) {
      throw ParseError(mwhere + ": dram_bytes must be > 0");
    }
    cache.Insert({name.get<std::string>(), blocks.get<std::int64_t>(),
                  threads.get<int>()},
                 metrics);
  }
  return cache;
}

MetricsCache LoadMetricsCacheFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open metrics cache " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseMetricsCache(buffer.str(), path.string());
}

std::string SerializeMetricsCache(const MetricsCache& cache) {
  json root = json::array();
  for (const auto& [key, metrics] : cache.entries()) {
    root.push_back({{"kernel_key",
                     {{"name", key.name},
                      {"block_count", key.block_count},
                      {"threads_per_block", key.threads_per_block}}},
                    {"metrics",
                     {{"flops", metrics.flop_count},
                      {"dram_bytes", metrics.dram_bytes}}}});
  }
  return root.dump(2) + "\n";
}

}  // namespace wavecast
