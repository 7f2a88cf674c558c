/* Copyright 2026 The gshare Authors. All Rights Reserved.

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

#include "gshare/memory_model.h"

#include <gtest/gtest.h>

#include "gshare/errors.h"
#include "gshare/profiles.h"

namespace gshare {
namespace {

const MemorySpec kVitHuge{4735, 2101, 2979};

TEST(MemoryModelTest, VitHugeFootprints) {
  EXPECT_EQ(ModelFootprint(kVitHuge, 1, SharingMode::kShare), 5080);
  EXPECT_EQ(ModelFootprint(kVitHuge, 3, SharingMode::kShare), 9282);
  EXPECT_EQ(ModelFootprint(kVitHuge, 1, SharingMode::kNoShare), 4735);
  EXPECT_EQ(ModelFootprint(kVitHuge, 3, SharingMode::kNoShare), 14205);
  EXPECT_EQ(ModelFootprint(kVitHuge, 0, SharingMode::kShare), 0);
}

TEST(MemoryModelTest, ServerCarriesContextOverhead) {
  EXPECT_EQ(kVitHuge.ParameterMb(), 2679);
}

TEST(MemoryModelTest, SharingBeatsNoShareFromTwoPods) {
  for (int n = 2; n < 10; ++n) {
    EXPECT_LT(ModelFootprint(kVitHuge, n, SharingMode::kShare),
              ModelFootprint(kVitHuge, n, SharingMode::kNoShare));
  }
}

TEST(MemoryModelTest, MaxPodsOnSixteenGigabytes) {
  const IngestResult r =
      LoadProfiles(std::string(GSHARE_DATA_DIR) + "/profiles/large_models.csv");
  const FunctionProfile* resnext = nullptr;
  for (const auto& p : r.profiles) {
    if (p.function_id() == "resnext") resnext = &p;
  }
  ASSERT_NE(resnext, nullptr);
  EXPECT_EQ(
      MaxPods(resnext->memory(), kDefaultGpuMemoryMb, SharingMode::kShare), 7);
  EXPECT_EQ(
      MaxPods(resnext->memory(), kDefaultGpuMemoryMb, SharingMode::kNoShare),
      4);
  EXPECT_EQ(MaxPods(kVitHuge, kDefaultGpuMemoryMb, SharingMode::kShare), 6);
  EXPECT_EQ(MaxPods(kVitHuge, kDefaultGpuMemoryMb, SharingMode::kNoShare), 3);
}

TEST(MemoryModelTest, FootprintSumsModelsOnGpu) {
  MemoryCatalog catalog{{"vit", kVitHuge}, {"resnet", {1525, 1427, 400}}};
  GpuMemoryState state;
  state.AddPod("vit");
  state.AddPod("vit");
  state.AddPod("resnet");
  EXPECT_EQ(Footprint(state, catalog, SharingMode::kShare),
            2979 + 2 * 2101 + 400 + 1427);
  EXPECT_EQ(Footprint(state, catalog, SharingMode::kNoShare), 2 * 4735 + 1525);
  state.RemovePod("vit");
  state.RemovePod("vit");
  EXPECT_EQ(Footprint(state, catalog, SharingMode::kShare), 400 + 1427);
  EXPECT_FALSE(state.resident.contains("vit"));
}

TEST(MemoryModelTest, AdmitRespectsCapacity) {
  MemoryCatalog catalog{{"vit", kVitHuge}};
  GpuMemoryState state;
  int admitted = 0;
  while (Admit(state, catalog, "vit", SharingMode::kShare)) {
    state.AddPod("vit");
    ++admitted;
  }
  EXPECT_EQ(admitted, 6);
  EXPECT_FALSE(
      Admit(GpuMemoryState{}, catalog, "unknown", SharingMode::kShare));
}

TEST(MemoryModelTest, UnknownModelInFootprintIsNotFound) {
  GpuMemoryState state;
  state.AddPod("ghost");
  try {
    Footprint(state, {}, SharingMode::kShare);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(MemoryModelTest, SpecValidation) {
  EXPECT_NO_THROW(kVitHuge.Validate());
  EXPECT_THROW((MemorySpec{-1, 0, 300}.Validate()), Error);
}

}  // namespace
}  // namespace gshare
