#include <gtest/gtest.h>

#include <cmath>

#include "bidbench/linmix.hpp"
#include "bidbench/overlay.hpp"
#include "bidbench/weather.hpp"
#include "support/oracles.hpp"

using namespace bidbench;

namespace {

void expect_all(const ImageBuffer& img, float v, double tol = 1e-6) {
  for (float s : img.data()) ASSERT_NEAR(s, v, tol);
}

}  // namespace

TEST(LinMix, SingleImageIdentity) {
  RandomStream rng(1);
  const auto img = oracle::random_image(rng, 9, 9, 3);
  EXPECT_EQ(linear_mix(std::vector<ImageBuffer>{img}), img);
  EXPECT_EQ(linear_mix(std::vector<ImageBuffer>{img, img, img}), img);
}

TEST(LinMix, ArithmeticOracles) {
  expect_all(linear_mix({ImageBuffer(4, 4, 3, 0.2f), ImageBuffer(4, 4, 3, 0.6f)}), 0.4f);
  expect_all(linear_mix({ImageBuffer(4, 4, 3, 0.0f), ImageBuffer(4, 4, 3, 0.4f), ImageBuffer(4, 4, 3, 0.8f),
                         ImageBuffer(4, 4, 3, 1.0f)}),
             0.55f);
}

TEST(LinMix, Errors) {
  EXPECT_THROW(linear_mix(std::vector<ImageBuffer>{}), InvalidArgument);
  EXPECT_THROW(linear_mix({ImageBuffer(4, 4, 3), ImageBuffer(4, 5, 3)}), InvalidArgument);
}

TEST(LinMix, OrderInvariant) {
  RandomStream rng(2);
  const auto a = oracle::random_image(rng, 8, 8, 3), b = oracle::random_image(rng, 8, 8, 3);
  const auto ab = linear_mix({a, b}), ba = linear_mix({b, a});
  for (std::size_t i = 0; i < ab.data().size(); ++i) ASSERT_NEAR(ab.data()[i], ba.data()[i], 1e-7);
}

TEST(Weather, MaskComposite) {
  const ImageBuffer J(6, 6, 3, 0.5f);
  const Atmosphere A{0.9};
  EXPECT_EQ(apply_mask_composite(J, {ImageBuffer(6, 6, 1, 0.0f), MaskKind::kSnow}, A), J);
  EXPECT_EQ(apply_mask_composite(J, {ImageBuffer(6, 6, 1, 1.0f), MaskKind::kSnow}, A), ImageBuffer(6, 6, 3, 0.9f));
  expect_all(apply_mask_composite(J, {ImageBuffer(6, 6, 1, 0.5f), MaskKind::kRainStreak}, A), 0.7f);
}

TEST(Weather, Haze) {
  const Atmosphere A{0.9};
  const ImageBuffer J(6, 6, 3, 0.2f);
  EXPECT_EQ(apply_haze(J, {ImageBuffer(6, 6, 1, 1.0f), HazeIntensity::kLight}, A), J);
  EXPECT_EQ(apply_haze(J, {ImageBuffer(6, 6, 1, 0.0f), HazeIntensity::kHeavy}, A), ImageBuffer(6, 6, 3, 0.9f));
  expect_all(apply_haze(J, {ImageBuffer(6, 6, 1, 0.25f), HazeIntensity::kModerate}, A), 0.725f);
}

TEST(Weather, GridMismatchRejected) {
  EXPECT_THROW(apply_haze(ImageBuffer(6, 6, 3), {ImageBuffer(5, 6, 1), HazeIntensity::kLight}, {0.9}),
               InvalidArgument);
}

TEST(Weather, Atmosphere) {
  RandomStream rng(4);
  EXPECT_DOUBLE_EQ(sample_atmosphere(rng, Mode::kTest).A, 0.9);
  EXPECT_DOUBLE_EQ(sample_atmosphere(rng, Mode::kTrain, {0.9, 0.9, 0.9}).A, 0.9);
  double sum = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double a = sample_atmosphere(rng, Mode::kTrain).A;
    ASSERT_GE(a, 0.8);
    ASSERT_LE(a, 1.0);
    sum += a;
  }
  EXPECT_NEAR(sum / n, 0.9, 0.005);
}

TEST(Weather, HazeIntensityNames) {
  for (auto h : {HazeIntensity::kLight, HazeIntensity::kModerate, HazeIntensity::kHeavy})
    EXPECT_EQ(parse_haze_intensity(to_string(h)), h);
  EXPECT_THROW(parse_haze_intensity("foggy"), InvalidArgument);
}

TEST(Overlay, ShadowBase) {
  RandomStream rng(5);
  ShadowTriplet t{oracle::random_image(rng, 8, 8, 3), oracle::random_image(rng, 8, 8, 3),
                  oracle::random_image(rng, 8, 8, 1)};
  EXPECT_EQ(shadow_base(t, true).base, t.shadow_image);
  EXPECT_EQ(shadow_base(t, true).gt_mask, t.shadow_mask);
  EXPECT_EQ(shadow_base(t, false).base, t.shadow_free_image);
  EXPECT_EQ(shadow_base(t, false).gt_mask, ImageBuffer(8, 8, 1, 0.0f));
}

TEST(Overlay, Reflection) {
  RandomStream rng(6);
  const auto T = oracle::random_image(rng, 12, 12, 3);
  const auto R = oracle::random_image(rng, 12, 12, 3);
  EXPECT_EQ(apply_reflection(T, {ImageBuffer(12, 12, 3, 0.0f), 11}, vignette_mask(12, 12, 0.4)), T);
  EXPECT_EQ(apply_reflection(T, {R, 5}, ImageBuffer(12, 12, 1, 0.0f)), T);
  expect_all(apply_reflection(ImageBuffer(4, 4, 3, 0.5f), {ImageBuffer(4, 4, 3, 0.6f), 3}, ImageBuffer(4, 4, 1, 0.5f)),
             0.8f);
  expect_all(apply_reflection(ImageBuffer(4, 4, 3, 0.7f), {ImageBuffer(4, 4, 3, 0.9f), 3}, ImageBuffer(4, 4, 1, 1.0f)),
             1.0f, 0.0);
}

TEST(Overlay, ReflectionKernelSampling) {
  RandomStream rng(7);
  EXPECT_EQ(sample_reflection_kernel(rng, Mode::kTest), 11);
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) {
    const int k = sample_reflection_kernel(rng, Mode::kTrain);
    ASSERT_EQ(k % 2, 1);
    ASSERT_GE(k, 3);
    ASSERT_LE(k, 17);
    seen.insert(k);
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(Overlay, Vignette) {
  expect_all(vignette_mask(9, 7, 0.0), 1.0f, 0.0);
  for (double s : {0.2, 0.4, 1.0}) EXPECT_FLOAT_EQ(vignette_mask(9, 9, s).at(4, 4), 1.0f);
  const auto v = vignette_mask(9, 9, 1.0);
  EXPECT_NEAR(v.at(0, 0), 0.0f, 1e-6);
  EXPECT_NEAR(v.at(8, 8), 0.0f, 1e-6);
  EXPECT_NEAR(vignette_mask(9, 9, 0.4).at(0, 0), 0.6f, 1e-6);
  EXPECT_THROW(vignette_mask(4, 4, 1.5), InvalidArgument);
}

TEST(Overlay, Watermark) {
  const ImageBuffer J(5, 5, 3, 0.4f);
  const Atmosphere A{0.9};
  EXPECT_EQ(apply_watermark(J, {ImageBuffer(5, 5, 3, 0.0f), ImageBuffer(5, 5, 1)}, A), J);
  EXPECT_EQ(apply_watermark(J, {ImageBuffer(5, 5, 3, 1.0f), ImageBuffer(5, 5, 1)}, A), ImageBuffer(5, 5, 3, 0.9f));
  expect_all(apply_watermark(J, {ImageBuffer(5, 5, 3, 0.5f), ImageBuffer(5, 5, 1)}, A), 0.65f);
}

TEST(Overlay, Binarize) {
  ImageBuffer m(3, 1, 1);
  m.at(0, 0) = 0.49f;
  m.at(1, 0) = 0.5f;
  m.at(2, 0) = 0.8f;
  const auto b = binarize(m);
  EXPECT_EQ(b.at(0, 0), 0.0f);
  EXPECT_EQ(b.at(1, 0), 1.0f);
  EXPECT_EQ(b.at(2, 0), 1.0f);
}

TEST(Composites, MatchNaiveReferences) {
  RandomStream rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int w = 31, h = 17;
    const auto J = oracle::random_image(rng, w, h, 3);
    const auto m = oracle::random_image(rng, w, h, 1);
    const auto wrgb = oracle::random_image(rng, w, h, 3);
    const double A = rng.uniform(0.8, 1.0);
    auto near = [](const ImageBuffer& a, const ImageBuffer& b) {
      for (std::size_t i = 0; i < a.data().size(); ++i) ASSERT_NEAR(a.data()[i], b.data()[i], 1e-6);
    };
    near(apply_mask_composite(J, {m, MaskKind::kSnow}, {A}), oracle::mask_composite(J, m, A));
    near(apply_haze(J, {m, HazeIntensity::kLight}, {A}), oracle::haze(J, m, A));
    near(apply_watermark(J, {wrgb, m}, {A}), oracle::mask_composite(J, wrgb, A));
    const auto V = vignette_mask(w, h, 0.4);
    near(apply_reflection(J, {wrgb, 7}, V), oracle::reflection(J, oracle::dense_gaussian(wrgb, 7, default_sigma(7)), V));
  }
}
