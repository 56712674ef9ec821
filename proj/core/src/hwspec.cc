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

#include "wavecast/hwspec.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "wavecast/error.h"
#include "format_util.h"

#ifndef WAVECAST_DATA_DIR
#define WAVECAST_DATA_DIR "data"
#endif

namespace wavecast {
namespace {

constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;
constexpr double kGiga = 1e9;
constexpr double kMega = 1e6;

// Field names accepted in a registry table. Units live in the names.
constexpr std::array<std::string_view, 16> kKnownFields = {
    "generation",
    "mem_capacity_gib",
    "mem_bandwidth_gb_s",
    "clock_mhz",
    "sm_count",
    "peak_gflops",
    "hourly_cost_usd",
    "max_threads_per_sm",
    "max_blocks_per_sm",
    "max_registers_per_sm",
    "max_shared_mem_per_sm_bytes",
    "warp_size",
    "max_warps_per_sm",
    "register_alloc_granularity",
    "shared_mem_alloc_granularity_bytes",
    "notes",
};

std::string Where(std::string_view source, const YAML::Node& node) {
  std::ostringstream os;
  os << source;
  const YAML::Mark mark = node.Mark();
  if (!mark.is_null()) os << ":" << mark.line + 1 << ":" << mark.column + 1;
  return os.str();
}

class TableReader {
 public:
  TableReader(std::string_view source, std::string gpu, const YAML::Node& table)
      : source_(source), gpu_(std::move(gpu)), table_(table) {}

  template <typename T>
  std::optional<T> Optional(std::string_view field) const {
    const YAML::Node node = table_[std::string(field)];
    if (!node) return std::nullopt;
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      throw ParseError(Where(source_, node) + ": GPU '" + gpu_ + "' field '" +
                       std::string(field) + "' has an invalid value '" +
                       node.Scalar() + "'");
    }
  }

  template <typename T>
  T Required(std::string_view field) const {
    std::optional<T> value = Optional<T>(field);
    if (!value) {
      throw ParseError(Where(source_, table_) + ": GPU '" + gpu_ +
                       "' is missing required field '" + std::string(field) +
                       "'");
    }
    return *value;
  }

 private:
  std::string_view source_;
  std::string gpu_;
  const YAML::Node& table_;
};

void Check(bool ok, const GpuSpec& spec, std::string_view field,
           std::string_view what) {
  if (!ok) {
    throw InputError("GPU '" + spec.name + "': field '" + std::string(field) +
                     "' " + std::string(what));
  }
}

}  // namespace

void Validate(const GpuSpec& spec) {
  Check(!spec.name.empty(), spec, "name", "must not be empty");
  Check(std::isfinite(spec.mem_bandwidth) && spec.mem_bandwidth > 0, spec,
        "mem_bandwidth", "must be > 0");
  Check(std::isfinite(spec.clock) && spec.clock > 0, spec, "clock",
        "must be > 0");
  Check(spec.sm_count >= 1, spec, "sm_count", "must be >= 1");
  Check(std::isfinite(spec.peak_flops) && spec.peak_flops > 0, spec,
        "peak_flops", "must be > 0");
  Check(std::isfinite(spec.mem_capacity) && spec.mem_capacity >= 0, spec,
        "mem_capacity", "must be >= 0");
  if (spec.hourly_cost) {
    Check(std::isfinite(*spec.hourly_cost) && *spec.hourly_cost > 0, spec,
          "hourly_cost", "must be > 0 when present");
  }
  const OccupancyLimits& o = spec.occupancy;
  Check(o.max_threads_per_sm >= 1, spec, "max_threads_per_sm", "must be >= 1");
  Check(o.max_blocks_per_sm >= 1, spec, "max_blocks_per_sm", "must be >= 1");
  Check(o.max_registers_per_sm >= 1, spec, "max_registers_per_sm",
        "must be >= 1");
  Check(o.max_shared_mem_per_sm >= 1, spec, "max_shared_mem_per_sm",
        "must be >= 1");
  Check(o.warp_size >= 1, spec, "warp_size", "must be >= 1");
  Check(o.max_warps_per_sm >= 1, spec, "max_warps_per_sm", "must be >= 1");
  Check(o.register_alloc_granularity >= 1, spec, "register_alloc_granularity",
        "must be >= 1");
  Check(o.shared_mem_alloc_granularity >= 1, spec,
        "shared_mem_alloc_granularity", "must be >= 1");
  Check(static_cast<long long>(o.max_threads_per_sm) ==
            static_cast<long long>(o.max_warps_per_sm) * o.warp_size,
        spec, "max_threads_per_sm", "must equal max_warps_per_sm * warp_size");
}

double RidgePoint(const GpuSpec& spec) {
  return spec.peak_flops / spec.mem_bandwidth;
}

void GpuRegistry::Add(GpuSpec spec) {
  Validate(spec);
  if (index_.contains(spec.name)) {
    throw InputError("duplicate GPU name '" + spec.name + "' in registry");
  }
  index_.emplace(spec.name, specs_.size());
  specs_.push_back(std::move(spec));
}

const GpuSpec* GpuRegistry::Find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &specs_[it->second];
}

const GpuSpec& GpuRegistry::At(std::string_view name) const {
  if (const GpuSpec* spec = Find(name)) return *spec;
  std::string known;
  for (const GpuSpec& s : specs_) {
    if (!known.empty()) known += ", ";
    known += s.name;
  }
  throw InputError("unknown GPU '" + std::string(name) +
                   "'; known GPUs: " + known);
}

std::vector<std::string> GpuRegistry::Names() const {
  std::vector<std::string> names;
  names.reserve(specs_.size());
  for (const GpuSpec& s : specs_) names.push_back(s.name);
  return names;
}

GpuRegistry LoadRegistry(std::string_view document, std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(document));
  } catch (const YAML::ParserException& e) {
    throw ParseError(std::string(source) + ":" + std::to_string(e.mark.line + 1) +
                     ":" + std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) {
    throw ParseError(std::string(source) +
                     ": registry must be a mapping from GPU name to a table");
  }

  GpuRegistry registry;
  std::set<std::string> seen;
  for (const auto& entry : root) {
    const std::string name = entry.first.as<std::string>();
    const YAML::Node& table = entry.second;
    if (!seen.insert(name).second) {
      throw ParseError(Where(source, entry.first) + ": duplicate GPU name '" +
                       name + "'");
    }
    if (!table.IsMap()) {
      throw ParseError(Where(source, table) + ": GPU '" + name +
                       "' must be a table of fields");
    }
    for (const auto& field : table) {
      const std::string key = field.first.as<std::string>();
      if (std::find(kKnownFields.begin(), kKnownFields.end(), key) ==
          kKnownFields.end()) {
        throw ParseError(Where(source, field.first) + ": GPU '" + name +
                         "' has unknown field '" + key + "'");
      }
    }

    TableReader r(source, name, table);
    GpuSpec spec;
    spec.name = name;
    spec.generation = r.Optional<std::string>("generation").value_or("");
    spec.mem_capacity = r.Required<double>("mem_capacity_gib") * kGiB;
    spec.mem_bandwidth = r.Required<double>("mem_bandwidth_gb_s") * kGiga;
    spec.clock = r.Required<double>("clock_mhz") * kMega;
    spec.sm_count = r.Required<int>("sm_count");
    spec.peak_flops = r.Required<double>("peak_gflops") * kGiga;
    spec.hourly_cost = r.Optional<double>("hourly_cost_usd");

    OccupancyLimits& o = spec.occupancy;
    o.max_threads_per_sm = r.Required<int>("max_threads_per_sm");
    o.max_blocks_per_sm = r.Required<int>("max_blocks_per_sm");
    o.max_registers_per_sm = r.Required<int>("max_registers_per_sm");
    o.max_shared_mem_per_sm = r.Required<int>("max_shared_mem_per_sm_bytes");
    o.warp_size = r.Optional<int>("warp_size").value_or(32);
    o.max_warps_per_sm = r.Required<int>("max_warps_per_sm");
    o.register_alloc_granularity = r.Required<int>("register_alloc_granularity");
    o.shared_mem_alloc_granularity =
        r.Required<int>("shared_mem_alloc_granularity_bytes");

    try {
      registry.Add(std::move(spec));
    } catch (const InputError& e) {
      throw ParseError(Where(source, table) + ": " + e.what());
    }
  }
  return registry;
}

GpuRegistry LoadRegistryFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open registry file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return LoadRegistry(buffer.str(), path.string());
}

std::string SerializeRegistry(const GpuRegistry& registry) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  for (const GpuSpec& s : registry.specs()) {
    const OccupancyLimits& o = s.occupancy;
    out << YAML::Key << s.name << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "generation" << YAML::Value << s.generation;
    out << YAML::Key << "mem_capacity_gib" << YAML::Value
        << ShortestDouble(s.mem_capacity / kGiB);
    out << YAML::Key << "mem_bandwidth_gb_s" << YAML::Value
        << ShortestDouble(s.mem_bandwidth / kGiga);
    out << YAML::Key << "clock_mhz" << YAML::Value
        << ShortestDouble(s.clock / kMega);
    out << YAML::Key << "sm_count" << YAML::Value << s.sm_count;
    out << YAML::Key << "peak_gflops" << YAML::Value
        << ShortestDouble(s.peak_flops / kGiga);
    if (s.hourly_cost) {
      out << YAML::Key << "hourly_cost_usd" << YAML::Value
          << ShortestDouble(*s.hourly_cost);
    }
    out << YAML::Key << "max_threads_per_sm" << YAML::Value
        << o.max_threads_per_sm;
    out << YAML::Key << "max_blocks_per_sm" << YAML::Value
        << o.max_blocks_per_sm;
    out << YAML::Key << "max_registers_per_sm" << YAML::Value
        << o.max_registers_per_sm;
    out << YAML::Key << "max_shared_mem_per_sm_bytes" << YAML::Value
        << o.max_shared_mem_per_sm;
    out << YAML::Key << "warp_size" << YAML::Value << o.warp_size;
    out << YAML::Key << "max_warps_per_sm" << YAML::Value << o.max_warps_per_sm;
    out << YAML::Key << "register_alloc_granularity" << YAML::Value
        << o.register_alloc_granularity;
    out << YAML::Key << "shared_mem_alloc_granularity_bytes" << YAML::Value
        << o.shared_mem_alloc_granularity;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::filesystem::path BundledRegistryPath() {
  return std::filesystem::path(WAVECAST_DATA_DIR) / "gpus.yaml";
}

}  // namespace wavecast
