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

#include "wavecast/model_io.h"

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>

#include "test_support.h"
#include "wavecast/error.h"

namespace wavecast {
namespace {

using testing::BundledRegistry;
using testing::TempDir;

class ModelIoTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    data_ = new Dataset(GenerateDataset(OpKind::kConv2d, 120, 6,
                                        BundledRegistry().specs(),
                                        GpuAssignment::kRoundRobin));
    TrainConfig c = RobustTrainConfig();
    c.hidden_layers = 2;
    c.hidden_width = 16;
    c.epochs = 2;
    c.batch_size = 32;
    model_ = new MlpModel(Train(*data_, c).model);
  }
  static void TearDownTestSuite() {
    delete model_;
    delete data_;
  }
  static Dataset* data_;
  static MlpModel* model_;
};

Dataset* ModelIoTest::data_ = nullptr;
MlpModel* ModelIoTest::model_ = nullptr;

TEST_F(ModelIoTest, RoundTripIsBitwise) {
  TempDir dir;
  SaveModel(*model_, dir / "conv2d.wcm");
  const MlpModel back = LoadModel(dir / "conv2d.wcm");
  EXPECT_EQ(back, *model_);
  for (const Sample& s : data_->samples) {
    const double a = Forward(*model_, s.Features());
    const double b = Forward(back, s.Features());
    EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
  }
  EXPECT_EQ(SerializeModel(back), SerializeModel(*model_));
}

TEST_F(ModelIoTest, StartsWithMagicAndVersion) {
  const std::string bytes = SerializeModel(*model_);
  ASSERT_GT(bytes.size(), 12u);
  EXPECT_EQ(bytes.substr(0, 8), std::string("WCMLP\0\0\1", 8));
  std::uint32_t version = 0;
  std::memcpy(&version, bytes.data() + 8, 4);
  EXPECT_EQ(version, kModelFormatVersion);
}

TEST_F(ModelIoTest, TruncatedFileIsParseError) {
  const std::string bytes = SerializeModel(*model_);
  for (std::size_t keep : {std::size_t{0}, std::size_t{5}, std::size_t{20},
                           bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_THROW(DeserializeModel(bytes.substr(0, keep)), ParseError) << keep;
  }
}

TEST_F(ModelIoTest, FlippedByteIsParseError) {
  std::string bytes = SerializeModel(*model_);
  bytes[bytes.size() - 20] ^= 0x40;
  EXPECT_THROW(DeserializeModel(bytes), ParseError);
  EXPECT_THROW(DeserializeModel(SerializeModel(*model_) + "x"), ParseError);
}

TEST_F(ModelIoTest, FutureVersionIsVersionError) {
  std::string bytes = SerializeModel(*model_);
  const std::uint32_t future = kModelFormatVersion + 1;
  std::memcpy(bytes.data() + 8, &future, 4);
  try {
    DeserializeModel(bytes, "future.wcm");
    FAIL();
  } catch (const VersionError& e) {
    EXPECT_NE(std::string(e.what()).find("future.wcm"), std::string::npos);
  }
}

TEST_F(ModelIoTest, MissingFileIsInputError) {
  TempDir dir;
  EXPECT_THROW(LoadModel(dir / "absent.wcm"), InputError);
}

}  // namespace
}  // namespace wavecast
