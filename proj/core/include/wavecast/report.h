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

#ifndef WAVECAST_REPORT_H_
#define WAVECAST_REPORT_H_

#include <span>
#include <string>
#include <string_view>

#include "wavecast/extrapolate.h"
#include "wavecast/predict.h"

namespace wavecast {

enum class OutputFormat {
  kTable,  // aligned text for humans
  kJson,   // validated by data/schema/prediction_report.schema.json
  kCsv,    // one row per operation, for plotting
};

std::string_view ToString(OutputFormat format);
OutputFormat ParseOutputFormat(std::string_view name);

inline constexpr int kReportSchemaVersion = 1;

// One section per report, in the given order.
std::string RenderReports(std::span<const PredictionReport> reports,
                          OutputFormat format);

// `ranked` is best first, as returned by RankReports.
std::string RenderRanking(std::span<const PredictionReport> ranked,
                          RankMetric metric, OutputFormat format);

std::string RenderExtrapolation(const Extrapolation& extrapolation,
                                double target_batch, OutputFormat format);

}  // namespace wavecast

#endif  // WAVECAST_REPORT_H_
