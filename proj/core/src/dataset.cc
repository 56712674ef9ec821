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

#include "wavecast/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "format_util.h"
#include "wavecast/error.h"

namespace wavecast {
namespace {

struct Range {
  int lo;
  int hi;
};

// Sampling ranges, inclusive, in OpFeatureNames() order.
const std::vector<Range>& Ranges(OpKind op) {
  static const std::vector<Range> kConv2d = {{1, 64}, {3, 2048}, {16, 2048},
                                             {1, 11}, {0, 3},    {1, 4},
                                             {1, 256}};
  static const std::vector<Range> kLstm = {{1, 128}, {1, 1280}, {1, 1280},
                                           {1, 64},  {1, 6},    {0, 1},
                                           {0, 1}};
  static const std::vector<Range> kBmm = {{1, 128}, {1, 1024}, {1, 1024},
                                          {1, 1024}};
  static const std::vector<Range> kLinear = {{1, 3500}, {1, 32768},
                                             {1, 32768}, {0, 1}};
  switch (op) {
    case OpKind::kConv2d:
      return kConv2d;
    case OpKind::kLstm:
      return kLstm;
    case OpKind::kBmm:
      return kBmm;
    case OpKind::kLinear:
      return kLinear;
  }
  throw InternalError("unhandled OpKind");
}

bool IsValid(OpKind op, const std::vector<double>& p, double memory_budget) {
  if (op == OpKind::kConv2d) {
    const double kernel = p[3], padding = p[4], image = p[6];
    if (kernel > image + 2 * padding) return false;
  }
  return EstimateWork(op, p).memory_footprint <= memory_budget;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <typename T>
T ParseNumber(const std::string& text, std::string_view source, int line,
              std::string_view column) {
  T value{};
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(std::string(source) + ":" + std::to_string(line) +
                     ": column '" + std::string(column) +
                     "' is not a number: '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<double> Sample::Features() const {
  std::vector<double> features = op_params;
  features.insert(features.end(), gpu_features.begin(), gpu_features.end());
  return features;
}

std::size_t Dataset::FeatureCount() const {
  return OpFeatureNames(op).size() + GpuFeatureNames().size();
}

std::vector<std::string> Dataset::ColumnNames() const {
  std::vector<std::string> names = OpFeatureNames(op);
  const auto& gpu = GpuFeatureNames();
  names.insert(names.end(), gpu.begin(), gpu.end());
  return names;
}

std::vector<double> SampleConfiguration(OpKind op, std::mt19937_64& rng,
                                        double memory_budget) {
  const std::vector<Range>& ranges = Ranges(op);
  std::vector<double> params(ranges.size());
  do {
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      std::uniform_int_distribution<int> dist(ranges[i].lo, ranges[i].hi);
      params[i] = dist(rng);
    }
  } while (!IsValid(op, params, memory_budget));
  return params;
}

Dataset GenerateDataset(OpKind op, int config_count, std::uint64_t seed,
                        std::span<const GpuSpec> gpus,
                        GpuAssignment assignment, const CostOracle& oracle) {
  if (config_count < 1) throw InputError("dataset needs at least one config");
  if (gpus.empty()) throw InputError("dataset needs at least one GPU");
  std::mt19937_64 rng(seed);
  Dataset dataset;
  dataset.op = op;
  for (int id = 0; id < config_count; ++id) {
    const std::vector<double> params = SampleConfiguration(op, rng);
    std::span<const GpuSpec> timed = gpus;
    if (assignment == GpuAssignment::kRoundRobin) {
      timed = gpus.subspan(static_cast<std::size_t>(id) % gpus.size(), 1);
    }
    for (const GpuSpec& gpu : timed) {
      Sample s;
      s.config_id = id;
      s.gpu = gpu.name;
      s.op_params = params;
      s.gpu_features = GpuFeatures(gpu);
      s.target_time = oracle(op, params, gpu);
      if (!(s.target_time > 0)) {
        throw InputError("oracle returned a non-positive time");
      }
      dataset.samples.push_back(std::move(s));
    }
  }
  return dataset;
}

void WriteDatasetCsv(const Dataset& dataset, std::ostream& out) {
  out << "config_id,gpu";
  for (const std::string& name : dataset.ColumnNames()) out << ',' << name;
  out << ",time_s\n";
  for (const Sample& s : dataset.samples) {
    out << s.config_id << ',' << s.gpu;
    for (double v : s.op_params) out << ',' << ShortestDouble(v);
    for (double v : s.gpu_features) out << ',' << ShortestDouble(v);
    out << ',' << ShortestDouble(s.target_time) << '\n';
  }
}

void WriteDatasetCsv(const Dataset& dataset,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write dataset file " + path.string());
  WriteDatasetCsv(dataset, out);
}

Dataset ReadDatasetCsv(std::istream& in, std::string_view source) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(std::string(source) + ": empty dataset file");
  }
  const std::vector<std::string> header = SplitCsv(line);

  Dataset dataset;
  bool matched = false;
  for (OpKind op : AllOpKinds()) {
    Dataset probe;
    probe.op = op;
    std::vector<std::string> expected = {"config_id", "gpu"};
    for (const std::string& name : probe.ColumnNames()) expected.push_back(name);
    expected.push_back("time_s");
    if (header == expected) {
      dataset.op = op;
      matched = true;
      break;
    }
  }
  if (!matched) {
    throw ParseError(std::string(source) +
                     ":1: header does not match any operation's columns");
  }

  const std::size_t n_op = OpFeatureNames(dataset.op).size();
  const std::size_t n_gpu = GpuFeatureNames().size();
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitCsv(line);
    if (cells.size() != header.size()) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                       ": expected " + std::to_string(header.size()) +
                       " columns, got " + std::to_string(cells.size()));
    }
    Sample s;
    s.config_id =
        ParseNumber<std::int64_t>(cells[0], source, line_no, header[0]);
    s.gpu = cells[1];
    for (std::size_t i = 0; i < n_op; ++i) {
      s.op_params.push_back(
          ParseNumber<double>(cells[2 + i], source, line_no, header[2 + i]));
    }
    for (std::size_t i = 0; i < n_gpu; ++i) {
      const std::size_t c = 2 + n_op + i;
      s.gpu_features.push_back(
          ParseNumber<double>(cells[c], source, line_no, header[c]));
    }
    s.target_time =
        ParseNumber<double>(cells.back(), source, line_no, header.back());
    if (!(s.target_time > 0)) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                       ": time_s must be > 0");
    }
    dataset.samples.push_back(std::move(s));
  }
  return dataset;
}

Dataset ReadDatasetCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open dataset file " + path.string());
  return ReadDatasetCsv(in, path.string());
}

}  // namespace wavecast
