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

#include "wavecast/report.h"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "format_util.h"
#include "json.hpp"
#include "wavecast/error.h"

namespace wavecast {
namespace {

using nlohmann::json;

std::string_view ToString(ScalingEquation e) {
  return e == ScalingEquation::kExact ? "exact" : "simplified";
}

json OptionalNumber(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json GammaToJson(const KernelGamma& g) {
  json j = {{"kernel", g.kernel_name}, {"gamma", g.gamma}};
  if (g.selection) {
    j["source"] = "metrics";
    j["intensity"] = g.selection->intensity;
    j["ridge_point"] = g.selection->ridge_point;
    j["branch"] = ToString(g.selection->branch);
  } else {
    j["source"] = "default";
  }
  return j;
}

json ReportToJson(const PredictionReport& r) {
  json ops = json::array();
  for (std::size_t i = 0; i < r.per_op.size(); ++i) {
    const OperationPrediction& p = r.per_op[i];
    json gammas = json::array();
    for (const KernelGamma& g : p.gammas) gammas.push_back(GammaToJson(g));
    ops.push_back({{"index", i},
                   {"op_name", p.op_name},
                   {"op_class", ToString(p.op_class)},
                   {"path", ToString(p.path)},
                   {"fallback", p.fallback},
                   {"measured_time_s", p.measured_time},
                   {"predicted_time_s", p.predicted_time},
                   {"gammas", std::move(gammas)}});
  }
  return {{"model_name", r.model_name},
          {"origin_gpu", r.origin_gpu},
          {"dest_gpu", r.dest_gpu},
          {"batch_size", r.batch_size},
          {"equation", ToString(r.equation)},
          {"measured_iteration_time_s", r.measured_iteration_time},
          {"iteration_time_s", r.iteration_time},
          {"throughput_samples_per_s", r.throughput},
          {"hourly_cost_usd", OptionalNumber(r.hourly_cost)},
          {"cost_normalized_throughput", OptionalNumber(r.cost_normalized_throughput)},
          {"warnings", r.warnings},
          {"operations", std::move(ops)}};
}

std::string Ms(double seconds) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << seconds * 1000.0;
  return os.str();
}

std::string Fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string GammaSummary(const OperationPrediction& p) {
  if (p.path == PredictionPath::kMlp) return "-";
  double lo = 1, hi = 0;
  int defaults = 0;
  for (const KernelGamma& g : p.gammas) {
    lo = std::min(lo, g.gamma);
    hi = std::max(hi, g.gamma);
    if (!g.selection) ++defaults;
  }
  std::string s = lo == hi ? Fixed(lo, 3) : Fixed(lo, 3) + ".." + Fixed(hi, 3);
  if (defaults > 0) s += " (" + std::to_string(defaults) + " default)";
  return s;
}

void Row(std::ostringstream& os, const std::vector<std::string>& cells,
         const std::vector<int>& widths) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) os << "  ";
    if (i == 0 || i == 1) {
      os << std::left << std::setw(widths[i]) << cells[i];
    } else {
      os << std::right << std::setw(widths[i]) << cells[i];
    }
  }
  os << "\n";
}

void Table(std::ostringstream& os, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
  std::vector<int> widths(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) {
    widths[i] = static_cast<int>(header[i].size());
    for (const auto& r : rows) {
      widths[i] = std::max(widths[i], static_cast<int>(r[i].size()));
    }
  }
  Row(os, header, widths);
  for (const auto& r : rows) Row(os, r, widths);
}

std::string ReportTable(const PredictionReport& r) {
  std::ostringstream os;
  os << "== " << r.model_name << ": " << r.origin_gpu << " -> " << r.dest_gpu
     << " (batch " << r.batch_size << ", " << ToString(r.equation)
     << " wave scaling)\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < r.per_op.size(); ++i) {
    const OperationPrediction& p = r.per_op[i];
    std::string path(ToString(p.path));
    if (p.fallback) path += "*";
    rows.push_back({std::to_string(i), p.op_name, path, Ms(p.measured_time),
                    Ms(p.predicted_time), GammaSummary(p)});
  }
  Table(os, {"#", "op", "path", "measured_ms", "predicted_ms", "gamma"}, rows);
  os << "iteration time: " << Ms(r.iteration_time) << " ms (measured on "
     << r.origin_gpu << ": " << Ms(r.measured_iteration_time) << " ms)\n";
  os << "throughput:     " << Fixed(r.throughput, 2) << " samples/s\n";
  if (r.cost_normalized_throughput) {
    os << "cost-normalized: " << Fixed(*r.cost_normalized_throughput, 2)
       << " samples/s per $/hr (at $" << Fixed(*r.hourly_cost, 2) << "/hr)\n";
  } else {
    os << "cost-normalized: n/a (no hourly cost for " << r.dest_gpu << ")\n";
  }
  for (const std::string& w : r.warnings) os << "warning: " << w << "\n";
  return os.str();
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view ToString(OutputFormat format) {
  switch (format) {
    case OutputFormat::kTable:
      return "table";
    case OutputFormat::kJson:
      return "json";
    case OutputFormat::kCsv:
      return "csv";
  }
  throw InternalError("unknown output format");
}

OutputFormat ParseOutputFormat(std::string_view name) {
  if (name == "table") return OutputFormat::kTable;
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  throw InputError("unknown output format '" + std::string(name) +
                   "' (expected table, json or csv)");
}

std::string RenderReports(std::span<const PredictionReport> reports,
                          OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::kTable:
      for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i > 0) os << "\n";
        os << ReportTable(reports[i]);
      }
      break;
    case OutputFormat::kJson: {
      json list = json::array();
      for (const PredictionReport& r : reports) list.push_back(ReportToJson(r));
      os << json{{"schema_version", kReportSchemaVersion},
                 {"reports", std::move(list)}}
                .dump(2)
         << "\n";
      break;
    }
    case OutputFormat::kCsv:
      os << "dest_gpu,op_index,op_name,path,measured_time_s,predicted_time_s\n";
      for (const PredictionReport& r : reports) {
        for (std::size_t i = 0; i < r.per_op.size(); ++i) {
          const OperationPrediction& p = r.per_op[i];
          os << CsvField(r.dest_gpu) << "," << i << "," << CsvField(p.op_name)
             << "," << ToString(p.path) << "," << ShortestDouble(p.measured_time)
             << "," << ShortestDouble(p.predicted_time) << "\n";
        }
      }
      break;
  }
  return os.str();
}

std::string RenderRanking(std::span<const PredictionReport> ranked,
                          RankMetric metric, OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::kTable: {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        const PredictionReport& r = ranked[i];
        rows.push_back(
            {std::to_string(i + 1), r.dest_gpu, Ms(r.iteration_time),
             Fixed(r.throughput, 2),
             r.hourly_cost ? Fixed(*r.hourly_cost, 2) : "-",
             r.cost_normalized_throughput
                 ? Fixed(*r.cost_normalized_throughput, 2)
                 : "-"});
      }
      os << "ranked by " << ToString(metric) << "\n";
      Table(os,
            {"rank", "gpu", "iteration_ms", "samples_per_s", "usd_per_hr",
             "samples_per_s_per_usd_hr"},
            rows);
      break;
    }
    case OutputFormat::kJson: {
      json list = json::array();
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        const PredictionReport& r = ranked[i];
        list.push_back(
            {{"rank", i + 1},
             {"gpu", r.dest_gpu},
             {"iteration_time_s", r.iteration_time},
             {"throughput_samples_per_s", r.throughput},
             {"hourly_cost_usd", OptionalNumber(r.hourly_cost)},
             {"cost_normalized_throughput",
              OptionalNumber(r.cost_normalized_throughput)}});
      }
      os << json{{"metric", ToString(metric)}, {"ranking", std::move(list)}}.dump(2)
         << "\n";
      break;
    }
    case OutputFormat::kCsv:
      os << "rank,gpu,iteration_time_s,throughput_samples_per_s,hourly_cost_usd,"
            "cost_normalized_throughput\n";
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        const PredictionReport& r = ranked[i];
        os << i + 1 << "," << CsvField(r.dest_gpu) << ","
           << ShortestDouble(r.iteration_time) << ","
           << ShortestDouble(r.throughput) << ","
           << (r.hourly_cost ? ShortestDouble(*r.hourly_cost) : "") << ","
           << (r.cost_normalized_throughput
                   ? ShortestDouble(*r.cost_normalized_throughput)
                   : "")
           << "\n";
      }
      break;
  }
  return os.str();
}

std::string RenderExtrapolation(const Extrapolation& e, double target_batch,
                                OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::kTable:
      os << "fit: time = " << e.fit.slope << " * batch + " << e.fit.intercept
         << " s (R^2 = " << Fixed(e.fit.r_squared, 5) << ", " << e.fit.points
         << " points)\n";
      os << "batch " << target_batch << ": " << Ms(e.seconds) << " ms, "
         << Fixed(target_batch / e.seconds, 2) << " samples/s\n";
      for (const std::string& w : e.warnings) os << "warning: " << w << "\n";
      break;
    case OutputFormat::kJson: {
      auto finite = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
      os << json{{"target_batch", target_batch},
                 {"seconds", e.seconds},
                 {"slope", e.fit.slope},
                 {"intercept", e.fit.intercept},
                 {"r_squared", e.fit.r_squared},
                 {"slope_stderr", finite(e.fit.slope_stderr)},
                 {"intercept_stderr", finite(e.fit.intercept_stderr)},
                 {"interpolated", e.interpolated},
                 {"warnings", e.warnings}}
                .dump(2)
         << "\n";
      break;
    }
    case OutputFormat::kCsv:
      os << "target_batch,seconds,slope,intercept,r_squared\n"
         << ShortestDouble(target_batch) << "," << ShortestDouble(e.seconds)
         << "," << ShortestDouble(e.fit.slope) << ","
         << ShortestDouble(e.fit.intercept) << ","
         << ShortestDouble(e.fit.r_squared) << "\n";
      break;
  }
  return os.str();
}

}  // namespace wavecast
