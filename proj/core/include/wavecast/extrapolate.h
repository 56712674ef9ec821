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

#ifndef WAVECAST_EXTRAPOLATE_H_
#define WAVECAST_EXTRAPOLATE_H_

#include <span>
#include <string>
#include <vector>

namespace wavecast {

struct BatchPoint {
  double batch_size = 0;
  double seconds = 0;
};

// Ordinary least squares fit of seconds = slope * batch + intercept.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 1;
  // Standard errors from the residual variance; NaN with only two points.
  double slope_stderr = 0;
  double intercept_stderr = 0;
  int points = 0;
};

// Throws InputError with fewer than two distinct batch sizes.
LinearFit FitLine(std::span<const BatchPoint> points);

struct Extrapolation {
  double seconds = 0;
  LinearFit fit;
  // Set when the target lies below the largest measured batch size.
  bool interpolated = false;
  std::vector<std::string> warnings;
};

inline constexpr double kMinRSquared = 0.95;

// Iteration time at `target_batch` from the fitted line. Warns when
// R^2 < kMinRSquared or the target is not beyond the observed batches.
// Throws InputError when the extrapolated time is not positive.
Extrapolation ExtrapolateBatch(std::span<const BatchPoint> points,
                               double target_batch);

}  // namespace wavecast

#endif  // WAVECAST_EXTRAPOLATE_H_
