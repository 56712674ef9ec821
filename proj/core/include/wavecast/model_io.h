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

#ifndef WAVECAST_MODEL_IO_H_
#define WAVECAST_MODEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "wavecast/mlp.h"

namespace wavecast {

// Binary model file layout:
//   8 bytes  magic "WCMLP\0\0\1"
//   u32      format version
//   u64      header length, then a JSON header (metadata, normalization,
//            hyperparameters, layer sizes)
//   float32  weights then bias of each layer, column-major
//   u64      FNV-1a checksum of every preceding byte
// Integers and floats are little-endian.
inline constexpr std::uint32_t kModelFormatVersion = 1;
inline constexpr std::string_view kModelExtension = ".wcm";

std::string SerializeModel(const MlpModel& model);
// Throws VersionError for an unknown version and ParseError for a
// truncated or corrupted buffer.
MlpModel DeserializeModel(std::string_view bytes,
                          std::string_view source = "<model>");

void SaveModel(const MlpModel& model, const std::filesystem::path& path);
MlpModel LoadModel(const std::filesystem::path& path);

}  // namespace wavecast

#endif  // WAVECAST_MODEL_IO_H_
