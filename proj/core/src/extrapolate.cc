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

#include "wavecast/extrapolate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "wavecast/error.h"

namespace wavecast {

LinearFit FitLine(std::span<const BatchPoint> points) {
  std::set<double> distinct;
  for (const BatchPoint& p : points) {
    if (!std::isfinite(p.batch_size) || !std::isfinite(p.seconds)) {
      throw InputError("extrapolation points must be finite");
    }
    distinct.insert(p.batch_size);
  }
  if (distinct.size() < 2) {
    throw InputError("extrapolation needs at least two distinct batch sizes (got " +
                     std::to_string(distinct.size()) + ")");
  }
  const double n = static_cast<double>(points.size());
  double mean_x = 0, mean_y = 0;
  for (const BatchPoint& p : points) {
    mean_x += p.batch_size;
    mean_y += p.seconds;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const BatchPoint& p : points) {
    const double dx = p.batch_size - mean_x;
    const double dy = p.seconds - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinearFit fit;
  fit.points = static_cast<int>(points.size());
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double sse = 0;
  for (const BatchPoint& p : points) {
    const double r = p.seconds - (fit.slope * p.batch_size + fit.intercept);
    sse += r * r;
  }
  fit.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  if (points.size() > 2) {
    const double sigma2 = sse / (n - 2);
    fit.slope_stderr = std::sqrt(sigma2 / sxx);
    fit.intercept_stderr = std::sqrt(sigma2 * (1.0 / n + mean_x * mean_x / sxx));
  } else {
    fit.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    fit.intercept_stderr = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

Extrapolation ExtrapolateBatch(std::span<const BatchPoint> points,
                               double target_batch) {
  Extrapolation result;
  result.fit = FitLine(points);
  result.seconds = result.fit.slope * target_batch + result.fit.intercept;
  if (!(result.seconds > 0)) {
    std::ostringstream os;
    os << "extrapolated time at batch " << target_batch << " is "
       << result.seconds << " s; the fitted line is not usable there";
    throw InputError(os.str());
  }
  if (result.fit.r_squared < kMinRSquared) {
    std::ostringstream os;
    os << "linear fit is poor (R^2 = " << result.fit.r_squared << " < "
       << kMinRSquared << ")";
    result.warnings.push_back(os.str());
  }
  double max_batch = -std::numeric_limits<double>::infinity();
  for (const BatchPoint& p : points) max_batch = std::max(max_batch, p.batch_size);
  if (target_batch < max_batch) {
    result.interpolated = true;
    std::ostringstream os;
    os << "target batch " << target_batch
       << " is below the largest observed batch " << max_batch
       << " (interpolation)";
    result.warnings.push_back(os.str());
  }
  return result;
}

}  // namespace wavecast
