#include <gtest/gtest.h>

#include <set>

#include "bidbench/compose.hpp"
#include "bidbench/scenario.hpp"
#include "bidbench/tasks.hpp"
#include "support/oracles.hpp"

using namespace bidbench;

TEST(Cases, CountsAreTwoToTheNMinusOne) {
  EXPECT_EQ(enumerate_cases(5).size(), 31u);
  EXPECT_EQ(enumerate_cases(8).size(), 255u);
  for (int n = 2; n <= 12; ++n) EXPECT_EQ(enumerate_cases(n).size(), (1u << n) - 1);
}

TEST(Cases, TwoComponentListing) {
  const auto c = enumerate_cases(2);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0], CaseMask::from_indices({1}));
  EXPECT_EQ(c[1], CaseMask::from_indices({2}));
  EXPECT_EQ(c[2], CaseMask::from_indices({1, 2}));
}

TEST(Cases, SortedByPopcountThenValueWithoutDuplicates) {
  const auto c = enumerate_cases(6);
  std::set<std::uint32_t> bits;
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_FALSE(c[i].empty());
    bits.insert(c[i].bits());
    if (i > 0) {
      EXPECT_TRUE(CaseOrder{}(c[i - 1], c[i]));
    }
  }
  EXPECT_EQ(bits.size(), c.size());
}

TEST(Cases, OutOfRangeRejected) {
  EXPECT_THROW(enumerate_cases(1), InvalidArgument);
  EXPECT_THROW(enumerate_cases(17), InvalidArgument);
}

TEST(CaseMask, Letters) {
  EXPECT_EQ(CaseMask::from_indices({1, 3, 4}).letters(), "acd");
  EXPECT_EQ(CaseMask::from_indices({2}).indices(), std::vector<int>{2});
  EXPECT_THROW(CaseMask::from_indices({0}), InvalidArgument);
}

TEST(Policy, Validation) {
  EXPECT_THROW(SelectionPolicy({0.5, 1.5}), InvalidArgument);
  EXPECT_THROW(SelectionPolicy({0.0, 0.0}), InvalidArgument);
  EXPECT_THROW(SelectionPolicy({0.5, 0.5}, {1, 1}), InvalidArgument);
  EXPECT_THROW(SelectionPolicy({0.5, 0.5}, {1}), InvalidArgument);
  EXPECT_NO_THROW(SelectionPolicy({0.5, 0.5}, {2, 1}));
}

TEST(Policy, CertainComponentAlwaysPresent) {
  const auto def = make_task(Task::kTask2A);
  RandomStream rng(1);
  for (int i = 0; i < 5000; ++i) ASSERT_TRUE(sample_case(def.policy, rng).contains(1));
}

TEST(Policy, SingleComponentIsSingleton) {
  RandomStream rng(2);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(sample_case(SelectionPolicy({1.0}), rng), CaseMask(1));
}

TEST(Policy, ConditionalOnNonEmptyProbability) {
  RandomStream rng(3);
  const SelectionPolicy policy({0.9, 0.9});
  int both = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) both += sample_case(policy, rng) == CaseMask(3) ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(both) / draws, 0.81 / 0.99, 0.01);
}

TEST(Policy, NeverEmpty) {
  RandomStream rng(4);
  const SelectionPolicy policy({0.05, 0.05, 0.05});
  for (int i = 0; i < 2000; ++i) ASSERT_FALSE(sample_case(policy, rng).empty());
}

TEST(Tasks, DefaultProbabilities) {
  EXPECT_EQ(make_task(Task::kTask2A).policy.probs(), (std::vector<double>{1.0, 0.5, 0.5, 0.5}));
  EXPECT_EQ(make_task(Task::kTask2B).policy.probs(), (std::vector<double>{0.6, 0.5, 0.5}));
  EXPECT_EQ(make_task(Task::kTask3).policy.probs(), (std::vector<double>{0.6, 0.5, 0.5}));
  EXPECT_DOUBLE_EQ(task1_probability(2), 0.9);
  EXPECT_DOUBLE_EQ(task1_probability(5), 0.6);
  EXPECT_DOUBLE_EQ(task1_probability(8), 0.5);
  EXPECT_THROW(task1_probability(9), InvalidArgument);
}

TEST(Tasks, ReservedAndDuplicateNamesRejected) {
  EXPECT_THROW(make_task(Task::kTask1, {"a", "clean"}), InvalidArgument);
  EXPECT_THROW(make_task(Task::kTask1, {"a", "a"}), InvalidArgument);
}

namespace {

ImageBuffer random_mask(RandomStream& rng, int w, int h) { return oracle::random_image(rng, w, h, 1); }

}  // namespace

TEST(Compose, SingleSourceTaskOneIsIdentity) {
  RandomStream rng(5);
  const auto def = make_task(Task::kTask1, {"x", "y", "z"});
  SampleAssets assets;
  for (int m = 1; m <= 3; ++m) assets.layers[m] = oracle::random_image(rng, 16, 16, 3);
  const auto r = compose(def, CaseMask::from_indices({2}), assets, {});
  EXPECT_EQ(r.mixed, assets.layers[2]);
  ASSERT_EQ(r.gts.size(), 1u);
  EXPECT_EQ(r.gts[0].name, "y");
}

TEST(Compose, TaskTwoAFullCaseMatchesChainedOperations) {
  RandomStream rng(6);
  const int w = 48, h = 40;
  const auto def = make_task(Task::kTask2A);
  SampleAssets assets;
  assets.background = oracle::random_image(rng, w, h, 3);
  assets.layers[1] = random_mask(rng, w, h);
  assets.layers[2] = random_mask(rng, w, h);
  assets.layers[3] = random_mask(rng, w, h);
  const auto mask = CaseMask::from_indices({1, 2, 3, 4});
  auto prng = RandomStream(7), drng = RandomStream(8);
  const auto params = sample_params(def, mask, Mode::kTest, w, h, prng, drng);
  ASSERT_FALSE(params.raindrops.drops.empty());
  const auto r = compose(def, mask, assets, params);

  const Atmosphere A{params.atmosphere};
  auto J = apply_mask_composite(*assets.background, {assets.layers[1], MaskKind::kRainStreak}, A);
  J = apply_mask_composite(J, {assets.layers[2], MaskKind::kSnow}, A);
  J = apply_haze(J, {assets.layers[3], params.haze_intensity}, A);
  J = render_raindrops(J, params.raindrops.drops, params.raindrop_cfg, params.attenuation).image;
  EXPECT_EQ(r.mixed, J);
  EXPECT_EQ(*r.clean, *assets.background);
  ASSERT_EQ(r.gts.size(), 4u);
  EXPECT_EQ(r.gts[3].name, "raindrop");
}

TEST(Compose, TestModeFixesScalars) {
  const auto def = make_task(Task::kTask2A);
  for (std::uint64_t i = 0; i < 50; ++i) {
    auto prng = derive_stream(1, i, Lane::kParams), drng = derive_stream(1, i, Lane::kRaindrops);
    const auto p = sample_params(def, CaseMask(0xF), Mode::kTest, 64, 64, prng, drng);
    EXPECT_FLOAT_EQ(static_cast<float>(p.atmosphere), 0.9f);
    EXPECT_DOUBLE_EQ(p.attenuation, 0.9);
    EXPECT_EQ(p.reflection_kernel, 11);
  }
}

TEST(Compose, TaskThreeShadowBaseAndTargets) {
  RandomStream rng(9);
  const int w = 32, h = 32;
  const auto def = make_task(Task::kTask3);
  SampleAssets assets;
  ShadowTriplet t{oracle::random_image(rng, w, h, 3), oracle::random_image(rng, w, h, 3), ImageBuffer(w, h, 1)};
  for (int y = 8; y < 20; ++y)
    for (int x = 8; x < 20; ++x) t.shadow_mask.at(x, y) = 1.0f;
  assets.shadow = t;
  assets.layers[2] = oracle::random_image(rng, w, h, 3);
  assets.watermark = WatermarkAsset{ImageBuffer(w, h, 3, 0.5f), ImageBuffer(w, h, 1, 1.0f)};

  const auto only_shadow = compose(def, CaseMask::from_indices({1}), assets, {});
  EXPECT_EQ(only_shadow.mixed, t.shadow_image);
  EXPECT_EQ(*only_shadow.clean, t.shadow_free_image);
  EXPECT_EQ(*only_shadow.region_mask, t.shadow_mask);

  const auto no_shadow = compose(def, CaseMask::from_indices({3}), assets, {});
  EXPECT_EQ(no_shadow.mixed, apply_watermark(t.shadow_free_image, *assets.watermark, Atmosphere{0.9}));
  ASSERT_EQ(no_shadow.gts.size(), 1u);
  EXPECT_EQ(no_shadow.gts[0].name, "watermark");

  const auto all = compose(def, CaseMask(7), assets, {});
  EXPECT_EQ(all.gts.size(), 3u);
}

TEST(Compose, RejectsEmptyAndUnknownCases) {
  const auto def = make_task(Task::kTask2B);
  EXPECT_THROW(compose(def, CaseMask{}, {}, {}), InvalidArgument);
  EXPECT_THROW(compose(def, CaseMask(8), {}, {}), InvalidArgument);
}

TEST(Compose, MissingAssetIsAssetError) {
  const auto def = make_task(Task::kTask2B);
  SampleAssets assets;
  assets.background = ImageBuffer(8, 8, 3);
  EXPECT_THROW(compose(def, CaseMask(1), assets, {}), AssetError);
}
