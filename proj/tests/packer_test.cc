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

#include "gshare/packer.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "gshare/errors.h"
#include "oracles/raster_oracle.h"

namespace gshare {
namespace {

PodRequest Req(const std::string& id, int w, int h,
               const std::string& fn = "f") {
  return PodRequest{id, fn, w, h};
}

std::vector<Rect> Sorted(std::vector<Rect> rects) {
  std::sort(rects.begin(), rects.end());
  return rects;
}

TEST(RectTest, Area) {
  EXPECT_EQ(Area(Rect{0, 0, 40, 12}), 480);
  EXPECT_EQ(Area(kFullGpu), 10000);
  EXPECT_EQ(Area(Rect{0, 0, 60, 50}), 3000);
}

TEST(RectTest, ContainmentAndIntersection) {
  EXPECT_TRUE(kFullGpu.Contains(Rect{10, 10, 5, 5}));
  EXPECT_FALSE((Rect{0, 0, 10, 10}).Intersects(Rect{10, 0, 5, 5}));
  EXPECT_TRUE((Rect{0, 0, 10, 10}).Intersects(Rect{9, 9, 5, 5}));
  EXPECT_THROW((Rect{90, 0, 20, 10}).Validate(), Error);
  EXPECT_THROW((Rect{0, 0, 0, 10}).Validate(), Error);
}

TEST(PodRequestTest, FromConfigUsesQuotaWidthAndSmHeight) {
  const PodRequest r =
      PodRequest::FromConfig("p", "f", ResourceConfig::FromPoint({12, 0.4}));
  EXPECT_EQ(r.w, 40);
  EXPECT_EQ(r.h, 12);
  EXPECT_EQ(r.Area(), 480);
  const PodRequest elastic =
      PodRequest::FromConfig("q", "f", ResourceConfig{24, 0.3, 0.8, 0});
  EXPECT_EQ(elastic.w, 80);
}

TEST(GpuNodeTest, FreshNodeIsOneFullRect) {
  const GpuNode node(0);
  EXPECT_EQ(node.free_rects(), std::vector<Rect>{kFullGpu});
  EXPECT_EQ(node.FragmentationIndex(), 0);
  EXPECT_TRUE(node.empty());
}

TEST(GpuNodeTest, FirstPlacementLeavesTwoOverlappingResiduals) {
  GpuNode node(0);
  const Rect placed = node.Place(kFullGpu, Req("a", 40, 30));
  EXPECT_EQ(placed, (Rect{0, 0, 40, 30}));
  EXPECT_EQ(Sorted(node.free_rects()),
            (std::vector<Rect>{{0, 30, 100, 70}, {40, 0, 60, 100}}));
  EXPECT_TRUE(gshare_test::RasterBreaches(node).empty());
  EXPECT_NEAR(node.FragmentationIndex(), 1.0 - 7000.0 / 8800.0, 1e-12);
}

TEST(GpuNodeTest, ExactFitConsumesTheRect) {
  GpuNode node(0);
  node.Place(kFullGpu, Req("whole", 100, 100));
  EXPECT_TRUE(node.free_rects().empty());
  EXPECT_EQ(node.FreeArea(), 0);
  EXPECT_TRUE(gshare_test::RasterBreaches(node).empty());
}

TEST(GpuNodeTest, SecondPlacementSubdividesAndPrunes) {
  GpuNode node(0);
  node.Place(kFullGpu, Req("a", 40, 30));
  node.Place(Rect{40, 0, 60, 100}, Req("b", 60, 50));
  // The top residual (40,50,60,50) lies inside the subdivided strip
  // (0,50,100,50) and is pruned.
  EXPECT_EQ(Sorted(node.free_rects()),
            (std::vector<Rect>{{0, 30, 40, 70}, {0, 50, 100, 50}}));
  EXPECT_EQ(node.FreeArea(), 10000 - 1200 - 3000);
  EXPECT_EQ(gshare_test::RasterFreeCells(node), 5800);
  EXPECT_TRUE(gshare_test::RasterBreaches(node).empty());
  EXPECT_TRUE(node.CheckInvariants().empty());
}

TEST(GpuNodeTest, PlaceErrors) {
  GpuNode node(0);
  node.Place(kFullGpu, Req("a", 40, 30));
  try {
    node.Place(kFullGpu, Req("b", 10, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
  try {
    node.Place(Rect{40, 0, 60, 100}, Req("b", 70, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
  }
  try {
    node.Place(Rect{40, 0, 60, 100}, Req("a", 10, 10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConflict);
  }
}

TEST(GpuNodeTest, ReleaseReturnsRectVerbatim) {
  GpuNode node(0);
  node.Place(kFullGpu, Req("a", 40, 30));
  EXPECT_EQ(node.Release("a"), (Rect{0, 0, 40, 30}));
  EXPECT_EQ(
      Sorted(node.free_rects()),
      (std::vector<Rect>{{0, 0, 40, 30}, {0, 30, 100, 70}, {40, 0, 60, 100}}));
  EXPECT_TRUE(node.empty());
  EXPECT_TRUE(gshare_test::RasterBreaches(node).empty());

  const std::vector<GpuNode> nodes = {node};
  const auto match = BestMatch(nodes, Req("a2", 40, 30));
  ASSERT_TRUE(match.has_value());
  EXPECT_EQ(match->rect, (Rect{0, 0, 40, 30}));
  EXPECT_EQ(match->area_diff, 0);
}

TEST(GpuNodeTest, ReleaseUnknownPodIsNotFound) {
  GpuNode node(0);
  try {
    node.Release("ghost");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(GpuNodeTest, RestructureRebuildsFragmentedList) {
  GpuNode node(0);
  node.Place(kFullGpu, Req("keep", 40, 30));
  for (int i = 0; i < 6; ++i) {
    const std::vector<GpuNode> view = {node};
    const auto m = BestMatch(view, Req("tmp" + std::to_string(i), 10, 10));
    ASSERT_TRUE(m.has_value());
    node.Place(m->rect, Req("tmp" + std::to_string(i), 10, 10));
  }
  for (int i = 0; i < 6; ++i) node.Release("tmp" + std::to_string(i));
  ASSERT_GT(node.free_rects().size(), 6u);
  ASSERT_TRUE(gshare_test::RasterBreaches(node).empty());

  EXPECT_EQ(node.Restructure(6), RestructureOutcome::kRebuilt);
  EXPECT_EQ(node.placements().at("keep").rect, (Rect{0, 0, 40, 30}));
  EXPECT_EQ(Sorted(node.free_rects()),
            (std::vector<Rect>{{0, 30, 100, 70}, {40, 0, 60, 100}}));
}

TEST(GpuNodeTest, RestructureBelowThresholdIsNoop) {
  GpuNode node(0);
  node.Place(kFullGpu, Req("a", 40, 30));
  const auto before = node.free_rects();
  EXPECT_EQ(node.Restructure(2), RestructureOutcome::kNoop);
  EXPECT_EQ(node.free_rects(), before);
}

TEST(GpuNodeTest, RestructureEmptyNodeCollapsesToFullRect) {
  GpuNode node(0);
  node.Place(kFullGpu, Req("a", 40, 30));
  node.Release("a");
  EXPECT_EQ(node.Restructure(16), RestructureOutcome::kRebuilt);
  EXPECT_EQ(node.free_rects(), std::vector<Rect>{kFullGpu});
  EXPECT_EQ(node.Restructure(16), RestructureOutcome::kNoop);
}

TEST(BestMatchTest, PrefersSmallestAreaDifferenceAcrossGpus) {
  std::vector<GpuNode> nodes = {GpuNode(1), GpuNode(2)};
  nodes[1].Place(kFullGpu, Req("floor", 100, 50));
  nodes[1].Place(Rect{0, 50, 100, 50}, Req("left", 50, 50));
  ASSERT_EQ(nodes[1].free_rects(), (std::vector<Rect>{{50, 50, 50, 50}}));
  const auto m = BestMatch(nodes, Req("p", 40, 30));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->gpu_id, 2);
  EXPECT_EQ(m->rect, (Rect{50, 50, 50, 50}));
  EXPECT_EQ(m->area_diff, 1300);
}

TEST(BestMatchTest, FullRequestIntoFreshGpuIsExact) {
  const std::vector<GpuNode> nodes = {GpuNode(0)};
  const auto m = BestMatch(nodes, Req("p", 100, 100));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->area_diff, 0);
}

TEST(BestMatchTest, NoContainerMeansNewGpu) {
  std::vector<GpuNode> nodes = {GpuNode(0)};
  nodes[0].Place(kFullGpu, Req("a", 50, 100));
  EXPECT_FALSE(BestMatch(nodes, Req("p", 60, 60)).has_value());
  EXPECT_FALSE(BestMatch({}, Req("p", 10, 10)).has_value());
}

TEST(BestMatchTest, TiesGoToLowerGpuId) {
  const std::vector<GpuNode> nodes = {GpuNode(3), GpuNode(1)};
  const auto m = BestMatch(nodes, Req("p", 10, 10));
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->gpu_id, 1);
  EXPECT_EQ(m->node_index, 1u);
}

TEST(BestMatchTest, MemoryAdmissionSkipsFullGpus) {
  const MemoryCatalog catalog = {{"vit", {4735, 2101, 2979}}};
  std::vector<GpuNode> nodes = {GpuNode(0), GpuNode(1)};
  const MemoryAdmission noshare{&catalog, SharingMode::kNoShare};
  for (int i = 0; i < 3; ++i) {
    const auto m =
        BestMatch(nodes, Req("v" + std::to_string(i), 10, 10, "vit"), noshare);
    ASSERT_TRUE(m.has_value());
    EXPECT_EQ(m->gpu_id, 0);
    nodes[m->node_index].Place(m->rect,
                               Req("v" + std::to_string(i), 10, 10, "vit"));
  }
  const auto fourth = BestMatch(nodes, Req("v3", 10, 10, "vit"), noshare);
  ASSERT_TRUE(fourth.has_value());
  EXPECT_EQ(fourth->gpu_id, 1);
  const auto shared = BestMatch(nodes, Req("v3", 10, 10, "vit"),
                                MemoryAdmission{&catalog, SharingMode::kShare});
  ASSERT_TRUE(shared.has_value());
  EXPECT_EQ(shared->gpu_id, 0);
}

TEST(UnionAreaTest, OverlapsCountOnce) {
  const std::vector<Rect> rects = {{0, 30, 40, 70}, {0, 50, 100, 50}};
  EXPECT_EQ(UnionArea(rects), 5800);
  EXPECT_EQ(UnionArea({}), 0);
}

TEST(ConsolidationTest, MixedPodsShareOneGpu) {
  std::vector<PodRequest> pods;
  for (int i = 0; i < 2; ++i)
    pods.push_back(Req("bert" + std::to_string(i), 60, 50));
  for (int i = 0; i < 2; ++i)
    pods.push_back(Req("rnnt" + std::to_string(i), 40, 24));
  for (int i = 0; i < 4; ++i)
    pods.push_back(Req("resnet" + std::to_string(i), 40, 12));
  std::int64_t area = 0;
  for (const auto& p : pods) area += p.Area();
  EXPECT_EQ(area, 9840);
  std::vector<GpuNode> nodes = {GpuNode(0)};
  for (const auto& p : pods) {
    const auto m = BestMatch(nodes, p);
    ASSERT_TRUE(m.has_value()) << p.pod_id;
    nodes[0].Place(m->rect, p);
  }
  EXPECT_EQ(nodes[0].placements().size(), 8u);
  EXPECT_TRUE(gshare_test::RasterBreaches(nodes[0]).empty());
  EXPECT_EQ(nodes[0].FreeArea(), 160);
}

}  // namespace
}  // namespace gshare
