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

#include "cli.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavecast/dataset.h"
#include "wavecast/error.h"
#include "wavecast/extrapolate.h"
#include "wavecast/hwspec.h"
#include "wavecast/metrics_cache.h"
#include "wavecast/mlp.h"
#include "wavecast/model_io.h"
#include "wavecast/occupancy.h"
#include "wavecast/predict.h"
#include "wavecast/report.h"
#include "wavecast/roofline.h"
#include "wavecast/synthesize.h"
#include "wavecast/trace.h"

namespace wavecast {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOptions {
  std::string registry;
  std::string models = "models";
  std::string cache;
  std::string format = "table";
  bool exact = false;
  double percentile = 99.5;
  std::uint64_t seed = 0;
};

struct PredictOptions {
  std::string trace;
  std::vector<std::string> gpus;
  bool fallback = false;
  std::optional<std::string> kernel_varying;  // comma-separated; may be empty
  std::string metric = "throughput";
};

struct DatasetOptions {
  std::string op = "conv2d";
  int count = 1000;
  std::vector<std::string> gpus;
  bool round_robin = false;
  std::string out;
};

struct TrainOptions {
  std::string data;
  std::string out;
  bool robust = false;
  std::string target_space;
  std::string feature_transform;
  std::string loss;
  int epochs = 80;
  int layers = 8;
  int width = 1024;
  int batch_size = 512;
  std::string history_csv;
};

struct EvalOptions {
  std::string model;
  std::string data;
};

struct SweepOptions {
  std::string data;
  std::vector<int> layers = {2, 4, 8};
  std::vector<int> widths = {32, 128, 512, 1024, 2048};
  int epochs = 80;
  bool robust = false;
};

struct OccupancyOptions {
  std::string gpu;
  int threads = 256;
  int registers = 32;
  int shared_mem = 0;
  std::int64_t blocks = 0;
};

struct GammaOptions {
  std::string gpu;
  double flops = 0;
  double bytes = 0;
};

struct SynthOptions {
  std::string templ = "resnet-like";
  std::string gpu;
  int batch = 32;
  double noise = 0.0;
  bool no_metrics = false;
  std::string out;
  std::string cache_out;
};

struct PlanOptions {
  std::string trace;
};

struct ExtrapolateOptions {
  std::vector<std::string> traces;
  std::vector<std::string> points;
  std::string gpu;
  double target = 0;
};

std::string Fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

GpuRegistry LoadRegistryFor(const GlobalOptions& g) {
  return LoadRegistryFile(g.registry.empty() ? BundledRegistryPath()
                                             : fs::path(g.registry));
}

OutputFormat FormatOf(const GlobalOptions& g) {
  return ParseOutputFormat(g.format);
}

void WriteText(const std::string& text, const std::string& path,
               std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write " + path);
  file << text;
}

std::vector<GpuSpec> SelectGpus(const GpuRegistry& registry,
                                const std::vector<std::string>& names) {
  std::vector<GpuSpec> gpus;
  if (names.empty()) return registry.specs();
  for (const std::string& n : names) gpus.push_back(registry.At(n));
  return gpus;
}

PredictionContext MakeContext(const GlobalOptions& g, const PredictOptions& p,
                              const ModelSet* models, const MetricsCache* cache) {
  PredictionContext context;
  if (p.kernel_varying) {
    std::set<std::string> names;
    std::istringstream list(*p.kernel_varying);
    for (std::string name; std::getline(list, name, ',');) {
      if (!name.empty()) names.insert(name);
    }
    context.classifier = OperationClassifier(std::move(names));
  }
  context.models = models;
  context.cache = cache;
  context.equation = g.exact ? ScalingEquation::kExact : ScalingEquation::kSimplified;
  context.allow_fallback = p.fallback;
  return context;
}

std::vector<PredictionReport> PredictAll(const GlobalOptions& g,
                                         const PredictOptions& p,
                                         const GpuRegistry& registry,
                                         std::ostream& err) {
  const IterationTrace trace = LoadTraceFile(p.trace, registry);
  const std::vector<GpuSpec> dests = SelectGpus(registry, p.gpus);
  MetricsCache cache;
  if (!g.cache.empty()) cache = LoadMetricsCacheFile(g.cache);
  cache.MergeFrom(trace);

  const OperationClassifier classifier =
      MakeContext(g, p, nullptr, nullptr).classifier;
  bool needs_models = false;
  for (const OperationRecord& op : trace.operations) {
    needs_models |= classifier.Classify(op.op_name) == OpClass::kKernelVarying;
  }
  ModelSet models;
  if (needs_models) models = LoadModelDirectory(g.models);
  const PredictionContext context = MakeContext(g, p, &models, &cache);

  std::vector<PredictionReport> reports;
  std::vector<std::string> problems;
  for (const GpuSpec& dest : dests) {
    try {
      reports.push_back(PredictIteration(trace, registry, dest, context));
    } catch (const InputError& e) {
      problems.push_back(e.what());
    }
  }
  if (!problems.empty()) {
    std::string message;
    for (const std::string& s : problems) message += (message.empty() ? "" : "\n") + s;
    throw InputError(message);
  }
  for (const PredictionReport& r : reports) {
    for (const std::string& w : r.warnings) {
      err << "warning: " << r.dest_gpu << ": " << w << "\n";
    }
  }
  return reports;
}

int CmdPredict(const GlobalOptions& g, const PredictOptions& p,
               std::ostream& out, std::ostream& err) {
  if (p.gpus.empty()) throw InputError("predict needs at least one destination GPU");
  const GpuRegistry registry = LoadRegistryFor(g);
  const std::vector<PredictionReport> reports = PredictAll(g, p, registry, err);
  out << RenderReports(reports, FormatOf(g));
  return kExitOk;
}

int CmdRank(const GlobalOptions& g, const PredictOptions& p, std::ostream& out,
            std::ostream& err) {
  const RankMetric metric = ParseRankMetric(p.metric);
  const GpuRegistry registry = LoadRegistryFor(g);
  if (metric == RankMetric::kCost) {
    for (const GpuSpec& gpu : SelectGpus(registry, p.gpus)) {
      if (!gpu.hourly_cost) {
        throw MissingCostError("cannot rank by cost: GPU '" + gpu.name +
                               "' has no hourly_cost_usd in the registry");
      }
    }
  }
  const std::vector<PredictionReport> ranked =
      RankReports(PredictAll(g, p, registry, err), metric);
  out << RenderRanking(ranked, metric, FormatOf(g));
  return kExitOk;
}

int CmdGpus(const GlobalOptions& g, std::ostream& out) {
  const GpuRegistry registry = LoadRegistryFor(g);
  if (FormatOf(g) == OutputFormat::kTable) {
    out << std::left << std::setw(8) << "gpu" << std::setw(10) << "gen"
        << std::right << std::setw(8) << "mem_gib" << std::setw(10) << "bw_gb_s"
        << std::setw(6) << "sms" << std::setw(10) << "gflops" << std::setw(9)
        << "usd_hr" << std::setw(10) << "ridge" << "\n";
    for (const GpuSpec& s : registry.specs()) {
      out << std::left << std::setw(8) << s.name << std::setw(10) << s.generation
          << std::right << std::setw(8) << Fixed(s.mem_capacity / (1 << 30), 0)
          << std::setw(10) << Fixed(s.mem_bandwidth / 1e9, 0) << std::setw(6)
          << s.sm_count << std::setw(10) << Fixed(s.peak_flops / 1e9, 0)
          << std::setw(9) << (s.hourly_cost ? Fixed(*s.hourly_cost, 2) : "-")
          << std::setw(10) << Fixed(RidgePoint(s), 2) << "\n";
    }
  } else {
    out << SerializeRegistry(registry);
  }
  return kExitOk;
}

int CmdDatasetGen(const GlobalOptions& g, const DatasetOptions& d,
                  std::ostream& out) {
  const GpuRegistry registry = LoadRegistryFor(g);
  const std::vector<GpuSpec> gpus = SelectGpus(registry, d.gpus);
  const Dataset dataset = GenerateDataset(
      ParseOpKind(d.op), d.count, g.seed, gpus,
      d.round_robin ? GpuAssignment::kRoundRobin : GpuAssignment::kEveryGpu);
  std::ostringstream csv;
  WriteDatasetCsv(dataset, csv);
  WriteText(csv.str(), d.out, out);
  return kExitOk;
}

TrainConfig ConfigFrom(const GlobalOptions& g, bool robust,
                       const std::string& target_space,
                       const std::string& feature_transform,
                       const std::string& loss) {
  TrainConfig config = robust ? RobustTrainConfig() : TrainConfig{};
  config.seed = g.seed;
  if (!target_space.empty()) config.target_space = ParseTargetSpace(target_space);
  if (!feature_transform.empty()) {
    config.feature_transform = ParseFeatureTransform(feature_transform);
  }
  if (!loss.empty()) config.loss = ParseLossFunction(loss);
  return config;
}

int CmdMlpTrain(const GlobalOptions& g, const TrainOptions& t, std::ostream& out) {
  const Dataset dataset = ReadDatasetCsv(fs::path(t.data));
  TrainConfig config =
      ConfigFrom(g, t.robust, t.target_space, t.feature_transform, t.loss);
  config.epochs = t.epochs;
  config.hidden_layers = t.layers;
  config.hidden_width = t.width;
  config.batch_size = t.batch_size;

  std::ostringstream history;
  history << "epoch,learning_rate,train_mape,test_mape\n";
  out << "training " << ToString(dataset.op) << " on " << dataset.samples.size()
      << " samples (" << config.hidden_layers << "x" << config.hidden_width
      << ", loss " << ToString(config.loss) << ", target "
      << ToString(config.target_space) << ", features "
      << ToString(config.feature_transform) << ")\n";
  const TrainResult result = Train(dataset, config, [&](const EpochStats& s) {
    out << "epoch " << std::setw(3) << s.epoch << "  lr " << s.learning_rate
        << "  train_mape " << Fixed(s.train_mape, 4) << "  test_mape "
        << Fixed(s.test_mape, 4) << "\n";
    out.flush();
    history << s.epoch << "," << s.learning_rate << "," << s.train_mape << ","
            << s.test_mape << "\n";
  });
  fs::path path = t.out;
  if (path.empty()) {
    fs::create_directories(g.models);
    path = fs::path(g.models) / (std::string(ToString(dataset.op)) +
                                 std::string(kModelExtension));
  }
  SaveModel(result.model, path);
  if (!t.history_csv.empty()) WriteText(history.str(), t.history_csv, out);
  out << "train MAPE: " << Fixed(result.train_mape, 6) << "\n";
  out << "test MAPE:  " << Fixed(result.test_mape, 6) << "\n";
  out << "saved " << path.string() << "\n";
  return kExitOk;
}

int CmdMlpEval(const GlobalOptions& g, const EvalOptions& e, std::ostream& out) {
  const MlpModel model = LoadModel(e.model);
  const Dataset dataset = ReadDatasetCsv(fs::path(e.data));
  const double mape = Evaluate(model, dataset);
  switch (FormatOf(g)) {
    case OutputFormat::kJson:
      out << json{{"model", e.model},
                  {"operation", ToString(model.operation)},
                  {"samples", dataset.samples.size()},
                  {"mape", mape}}
                 .dump(2)
          << "\n";
      break;
    case OutputFormat::kCsv:
      out << "model,samples,mape\n"
          << e.model << "," << dataset.samples.size() << "," << mape << "\n";
      break;
    case OutputFormat::kTable:
      out << "MAPE: " << Fixed(mape, 6) << " over " << dataset.samples.size()
          << " samples\n";
      break;
  }
  return kExitOk;
}

int CmdMlpSweep(const GlobalOptions& g, const SweepOptions& s, std::ostream& out) {
  const Dataset dataset = ReadDatasetCsv(fs::path(s.data));
  TrainConfig base = ConfigFrom(g, s.robust, "", "", "");
  base.epochs = s.epochs;
  const std::vector<SweepPoint> points =
      ArchitectureSweep(dataset, s.layers, s.widths, base);
  out << "hidden_layers,hidden_width,train_mape,test_mape\n";
  for (const SweepPoint& p : points) {
    out << p.hidden_layers << "," << p.hidden_width << "," << p.train_mape << ","
        << p.test_mape << "\n";
  }
  return kExitOk;
}

int CmdOccupancy(const GlobalOptions& g, const OccupancyOptions& o,
                 std::ostream& out) {
  const GpuRegistry registry = LoadRegistryFor(g);
  const GpuSpec& gpu = registry.At(o.gpu);
  KernelLaunchConfig launch;
  launch.block_count = o.blocks > 0 ? o.blocks : 1;
  launch.threads_per_block = o.threads;
  launch.registers_per_thread = o.registers;
  launch.shared_mem_per_block = o.shared_mem;
  const Occupancy occ = ComputeOccupancy(launch, gpu);
  const std::int64_t wave = WaveSize(launch, gpu);
  if (FormatOf(g) == OutputFormat::kJson) {
    json j = {{"gpu", gpu.name},
              {"blocks_per_sm", occ.blocks_per_sm},
              {"wave_size", wave},
              {"limiter", ToString(occ.limiter)}};
    if (o.blocks > 0) j["waves"] = (o.blocks + wave - 1) / wave;
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "gpu:           " << gpu.name << "\n"
      << "blocks per SM: " << occ.blocks_per_sm << "\n"
      << "wave size W:   " << wave << "\n"
      << "limiter:       " << ToString(occ.limiter) << "\n";
  if (o.blocks > 0) out << "waves:         " << (o.blocks + wave - 1) / wave << "\n";
  return kExitOk;
}

int CmdGamma(const GlobalOptions& g, const GammaOptions& o, std::ostream& out) {
  const GpuRegistry registry = LoadRegistryFor(g);
  const GpuSpec& gpu = registry.At(o.gpu);
  const GammaSelection s =
      SelectGamma(ArithmeticIntensity({o.flops, o.bytes}), gpu);
  if (FormatOf(g) == OutputFormat::kJson) {
    out << json{{"gpu", gpu.name},
                {"intensity", s.intensity},
                {"ridge_point", s.ridge_point},
                {"gamma", s.gamma},
                {"branch", ToString(s.branch)}}
               .dump(2)
        << "\n";
    return kExitOk;
  }
  out << "gpu:    " << gpu.name << "\n"
      << "x:      " << s.intensity << " FLOP/byte\n"
      << "R:      " << s.ridge_point << " FLOP/byte\n"
      << "gamma:  " << s.gamma << "\n"
      << "branch: " << ToString(s.branch) << "\n";
  return kExitOk;
}

int CmdSynth(const GlobalOptions& g, const SynthOptions& s, std::ostream& out) {
  const GpuRegistry registry = LoadRegistryFor(g);
  WorkloadTemplate workload;
  const std::vector<std::string> builtins = BuiltinTemplateNames();
  if (std::find(builtins.begin(), builtins.end(), s.templ) != builtins.end()) {
    workload = BuiltinTemplate(s.templ, s.batch);
  } else {
    workload = LoadWorkloadTemplateFile(s.templ);
  }
  SynthesisOptions options;
  options.noise = s.noise;
  options.attach_metrics = !s.no_metrics;
  IterationTrace trace = SynthesizeTrace(workload, registry.At(s.gpu), g.seed, options);
  if (!s.cache_out.empty()) {
    MetricsCache cache;
    cache.MergeFrom(SynthesizeTrace(workload, registry.At(s.gpu), g.seed,
                                    SynthesisOptions{s.noise, true}));
    WriteText(SerializeMetricsCache(cache), s.cache_out, out);
  }
  WriteText(SerializeTrace(trace), s.out, out);
  return kExitOk;
}

int CmdPlan(const GlobalOptions& g, const PlanOptions& p, std::ostream& out) {
  const GpuRegistry registry = LoadRegistryFor(g);
  const IterationTrace trace = LoadTraceFile(p.trace, registry);
  const std::vector<KernelKey> keys = SignificantKernels(trace, g.percentile);
  std::map<KernelKey, std::pair<double, bool>> info;  // max time, has metrics
  for (const OperationRecord& op : trace.operations) {
    for (const KernelRecord& k : op.kernels) {
      auto& entry = info[KeyOf(k)];
      entry.first = std::max(entry.first, k.measured_time);
      entry.second |= k.metrics.has_value();
    }
  }
  switch (FormatOf(g)) {
    case OutputFormat::kJson: {
      json list = json::array();
      for (const KernelKey& k : keys) {
        list.push_back({{"name", k.name},
                        {"block_count", k.block_count},
                        {"threads_per_block", k.threads_per_block},
                        {"time_ms", info[k].first * 1000.0},
                        {"has_metrics", info[k].second}});
      }
      out << json{{"percentile", g.percentile}, {"kernels", list}}.dump(2) << "\n";
      break;
    }
    case OutputFormat::kCsv:
      out << "name,block_count,threads_per_block,time_ms,has_metrics\n";
      for (const KernelKey& k : keys) {
        out << k.name << "," << k.block_count << "," << k.threads_per_block << ","
            << info[k].first * 1000.0 << "," << (info[k].second ? 1 : 0) << "\n";
      }
      break;
    case OutputFormat::kTable:
      out << keys.size() << " kernel(s) at or above the " << g.percentile
          << "th percentile of kernel time\n";
      for (const KernelKey& k : keys) {
        out << "  " << k.name << "  blocks=" << k.block_count
            << " threads=" << k.threads_per_block << "  "
            << Fixed(info[k].first * 1000.0, 4) << " ms"
            << (info[k].second ? "  (metrics present)" : "") << "\n";
      }
      break;
  }
  return kExitOk;
}

BatchPoint ParsePoint(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InputError("point '" + text + "' must look like BATCH:SECONDS");
  }
  try {
    std::size_t used = 0;
    const double b = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("batch");
    const std::string rest = text.substr(colon + 1);
    const double s = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("seconds");
    return {b, s};
  } catch (const std::logic_error&) {
    throw InputError("point '" + text + "' must look like BATCH:SECONDS");
  }
}

int CmdExtrapolate(const GlobalOptions& g, const ExtrapolateOptions& e,
                   std::ostream& out, std::ostream& err) {
  std::vector<BatchPoint> points;
  for (const std::string& p : e.points) points.push_back(ParsePoint(p));
  if (!e.traces.empty()) {
    if (e.gpu.empty()) throw InputError("--gpu is required when traces are given");
    const GpuRegistry registry = LoadRegistryFor(g);
    for (const std::string& path : e.traces) {
      PredictOptions p;
      p.trace = path;
      p.gpus = {e.gpu};
      const PredictionReport r = PredictAll(g, p, registry, err).front();
      points.push_back({static_cast<double>(r.batch_size), r.iteration_time});
    }
  }
  const Extrapolation result = ExtrapolateBatch(points, e.target);
  for (const std::string& w : result.warnings) err << "warning: " << w << "\n";
  out << RenderExtrapolation(result, e.target, FormatOf(g));
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"wavecast: predict DNN training iteration time across GPUs"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--registry", g.registry,
                 "GPU registry YAML (default: the bundled registry)")
      ->envname("WAVECAST_REGISTRY");
  app.add_option("--models", g.models, "directory of trained MLP models")
      ->envname("WAVECAST_MODELS")
      ->capture_default_str();
  app.add_option("--cache", g.cache, "kernel metrics cache (JSON list)");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  app.add_flag("--exact", g.exact,
               "use the exact wave-count scaling equation instead of the "
               "simplified one");
  app.add_option("--percentile", g.percentile,
                 "kernel-time percentile for the profiling plan")
      ->check(CLI::Range(0.0, 100.0))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();

  PredictOptions predict;
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "predict a trace's iteration time on GPUs");
  predict_cmd->add_option("trace", predict.trace, "trace file")->required();
  predict_cmd->add_option("gpus", predict.gpus, "destination GPUs")->required();
  predict_cmd->add_flag("--fallback", predict.fallback,
                        "wave-scale kernel-varying ops that have no model");
  predict_cmd->add_option("--kernel-varying", predict.kernel_varying,
                          "replace the kernel-varying op list (comma-separated)");

  PredictOptions rank;
  CLI::App* rank_cmd = app.add_subcommand("rank", "rank GPUs for a trace");
  rank_cmd->add_option("trace", rank.trace, "trace file")->required();
  rank_cmd->add_option("gpus", rank.gpus, "GPUs to rank (default: all)");
  rank_cmd->add_option("--metric", rank.metric, "ranking metric")
      ->check(CLI::IsMember({"throughput", "cost"}))
      ->capture_default_str();
  rank_cmd->add_flag("--fallback", rank.fallback,
                     "wave-scale kernel-varying ops that have no model");
  rank_cmd->add_option("--kernel-varying", rank.kernel_varying,
                       "replace the kernel-varying op list (comma-separated)");

  CLI::App* gpus_cmd = app.add_subcommand("gpus", "list the GPU registry");

  DatasetOptions dataset;
  CLI::App* dataset_cmd =
      app.add_subcommand("dataset-gen", "generate an oracle-timed dataset (CSV)");
  dataset_cmd->add_option("--op", dataset.op, "conv2d, lstm, bmm or linear")
      ->capture_default_str();
  dataset_cmd->add_option("--count", dataset.count, "number of configurations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  dataset_cmd->add_option("--gpus", dataset.gpus, "GPUs to time (default: all)")
      ->delimiter(',');
  dataset_cmd->add_flag("--round-robin", dataset.round_robin,
                        "time configuration i on GPU i mod n only");
  dataset_cmd->add_option("--out,-o", dataset.out, "output path (default: stdout)");

  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("mlp-train", "train an MLP on a dataset");
  train_cmd->add_option("--data", train.data, "dataset CSV")->required();
  train_cmd->add_option("--out,-o", train.out,
                        "model path (default: <models>/<op>.wcm)");
  train_cmd->add_flag("--robust", train.robust,
                      "log1p features, log-time output, log-absolute loss");
  train_cmd->add_option("--target-space", train.target_space, "raw or log");
  train_cmd->add_option("--feature-transform", train.feature_transform,
                        "identity or log1p");
  train_cmd->add_option("--loss", train.loss, "mape or log_abs");
  train_cmd->add_option("--epochs", train.epochs)->capture_default_str();
  train_cmd->add_option("--layers", train.layers, "hidden layers")
      ->capture_default_str();
  train_cmd->add_option("--width", train.width, "hidden layer width")
      ->capture_default_str();
  train_cmd->add_option("--batch-size", train.batch_size)->capture_default_str();
  train_cmd->add_option("--history", train.history_csv,
                        "write per-epoch MAPE to this CSV");

  EvalOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("mlp-eval", "MAPE of a model on a dataset");
  eval_cmd->add_option("--model", eval.model, "model file")->required();
  eval_cmd->add_option("--data", eval.data, "dataset CSV")->required();

  SweepOptions sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("mlp-sweep", "train across hidden layer counts and widths");
  sweep_cmd->add_option("--data", sweep.data, "dataset CSV")->required();
  sweep_cmd->add_option("--layers", sweep.layers)->delimiter(',');
  sweep_cmd->add_option("--widths", sweep.widths)->delimiter(',');
  sweep_cmd->add_option("--epochs", sweep.epochs)->capture_default_str();
  sweep_cmd->add_flag("--robust", sweep.robust, "as for mlp-train");

  OccupancyOptions occupancy;
  CLI::App* occupancy_cmd =
      app.add_subcommand("occupancy", "blocks per SM, wave size and limiter");
  occupancy_cmd->add_option("--gpu", occupancy.gpu)->required();
  occupancy_cmd->add_option("--threads", occupancy.threads, "threads per block")
      ->capture_default_str();
  occupancy_cmd->add_option("--registers", occupancy.registers,
                            "registers per thread")
      ->capture_default_str();
  occupancy_cmd->add_option("--shared-mem", occupancy.shared_mem,
                            "shared memory per block (bytes)")
      ->capture_default_str();
  occupancy_cmd->add_option("--blocks", occupancy.blocks,
                            "grid size, to report the wave count");

  GammaOptions gamma;
  CLI::App* gamma_cmd = app.add_subcommand("gamma", "roofline gamma for a kernel");
  gamma_cmd->add_option("--gpu", gamma.gpu, "destination GPU")->required();
  gamma_cmd->add_option("--flops", gamma.flops)->required();
  gamma_cmd->add_option("--bytes", gamma.bytes, "DRAM bytes")->required();

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "synthesize an oracle trace");
  synth_cmd->add_option("--template", synth.templ,
                        "built-in template name or a template JSON file")
      ->capture_default_str();
  synth_cmd->add_option("--gpu", synth.gpu, "origin GPU")->required();
  synth_cmd->add_option("--batch", synth.batch, "batch size (built-in templates)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "relative log-normal time jitter")
      ->check(CLI::NonNegativeNumber);
  synth_cmd->add_flag("--no-metrics", synth.no_metrics,
                      "omit kernel metrics from the trace");
  synth_cmd->add_option("--cache-out", synth.cache_out,
                        "also write the kernel metrics as a cache file");
  synth_cmd->add_option("--out,-o", synth.out, "output path (default: stdout)");

  PlanOptions plan;
  CLI::App* plan_cmd = app.add_subcommand(
      "plan", "kernels worth collecting metrics for (profiling plan)");
  plan_cmd->add_option("trace", plan.trace, "trace file")->required();

  ExtrapolateOptions extrapolate;
  CLI::App* extrapolate_cmd = app.add_subcommand(
      "extrapolate", "fit iteration time against batch size and extrapolate");
  extrapolate_cmd->add_option("traces", extrapolate.traces,
                              "traces at different batch sizes");
  extrapolate_cmd->add_option("--point", extrapolate.points,
                              "BATCH:SECONDS observation (repeatable)");
  extrapolate_cmd->add_option("--gpu", extrapolate.gpu, "destination GPU");
  extrapolate_cmd->add_option("--target", extrapolate.target, "target batch size")
      ->required();

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*predict_cmd) return CmdPredict(g, predict, out, err);
    if (*rank_cmd) return CmdRank(g, rank, out, err);
    if (*gpus_cmd) return CmdGpus(g, out);
    if (*dataset_cmd) return CmdDatasetGen(g, dataset, out);
    if (*train_cmd) return CmdMlpTrain(g, train, out);
    if (*eval_cmd) return CmdMlpEval(g, eval, out);
    if (*sweep_cmd) return CmdMlpSweep(g, sweep, out);
    if (*occupancy_cmd) return CmdOccupancy(g, occupancy, out);
    if (*gamma_cmd) return CmdGamma(g, gamma, out);
    if (*synth_cmd) return CmdSynth(g, synth, out);
    if (*plan_cmd) return CmdPlan(g, plan, out);
    if (*extrapolate_cmd) return CmdExtrapolate(g, extrapolate, out, err);
    throw InternalError("no subcommand dispatched");
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace wavecast
