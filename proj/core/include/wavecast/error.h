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

#ifndef WAVECAST_ERROR_H_
#define WAVECAST_ERROR_H_

#include <stdexcept>
#include <string>

namespace wavecast {

// Errors caused by the caller's input: malformed files, unknown GPUs,
// launches that cannot run, missing models. The CLI maps these to exit 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

// A kernel whose single thread block exceeds a per-SM resource.
class InfeasibleLaunchError : public InputError {
 public:
  using InputError::InputError;
};

class MissingModelError : public InputError {
 public:
  using InputError::InputError;
};

class MissingCostError : public InputError {
 public:
  using InputError::InputError;
};

// Serialized model with a version tag this build does not understand.
class VersionError : public InputError {
 public:
  using InputError::InputError;
};

// A broken internal invariant (a bug, not bad input). CLI exit 2.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace wavecast

#endif  // WAVECAST_ERROR_H_
