// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "voxsil/synthetic.hpp"

using namespace voxsil;

TEST(Voxelize, SphereCountNearAnalyticVolumeAndMatchesInsideTest) {
  const SyntheticShapeSpec spec{Primitive::Sphere, {{"radius", 0.35}}, {32, 32, 32}};
  const BinaryVoxelGrid g = voxelize_primitive(spec);
  const double analytic = 4.0 / 3.0 * M_PI * std::pow(0.35, 3) * 32768;
  EXPECT_NEAR(double(g.occupied_count()), analytic, 0.02 * analytic);

  std::size_t count = 0;
  for (int n = 0; n < 32; ++n)
    for (int m = 0; m < 32; ++m)
      for (int l = 0; l < 32; ++l) {
        const double x = (m + 0.5) / 32 - 0.5, y = (n + 0.5) / 32 - 0.5, z = (l + 0.5) / 32 - 0.5;
        const bool inside = x * x + y * y + z * z <= 0.35 * 0.35;
        count += inside;
        EXPECT_EQ(g(n, m, l), inside ? 1 : 0);
      }
  EXPECT_EQ(g.occupied_count(), count);
}

TEST(Voxelize, FullBoxAndEmptySphere) {
  const SyntheticShapeSpec box{Primitive::Box, {{"sx", 0.5}, {"sy", 0.5}, {"sz", 0.5}}, {16, 16, 16}};
  EXPECT_EQ(voxelize_primitive(box).occupied_count(), 4096u);
  const SyntheticShapeSpec dot{Primitive::Sphere, {{"radius", 0.0}}, {17, 17, 17}};
  EXPECT_EQ(voxelize_primitive(dot).occupied_count(), 0u);
}

TEST(Voxelize, Deterministic) {
  const SyntheticShapeSpec chair{Primitive::Chair, {}, {24, 24, 24}};
  EXPECT_EQ(voxelize_primitive(chair), voxelize_primitive(chair));
}

TEST(Voxelize, ConvergesToAnalyticVolumeWithResolution) {
  const auto error_at = [](int res) {
    const SyntheticShapeSpec s{Primitive::Sphere, {{"radius", 0.3}}, {res, res, res}};
    const double fraction = double(voxelize_primitive(s).occupied_count()) / (double(res) * res * res);
    return std::abs(fraction - 4.0 / 3.0 * M_PI * 0.027);
  };
  const double e16 = error_at(16), e32 = error_at(32), e64 = error_at(64);
  EXPECT_GT(e16, e32);
  EXPECT_GT(e32, e64);
  EXPECT_LT(e64, 0.002);
}

TEST(Voxelize, CylinderVolume) {
  const SyntheticShapeSpec s{Primitive::Cylinder, {{"radius", 0.3}, {"half_height", 0.4}}, {64, 64, 64}};
  const double frac = double(voxelize_primitive(s).occupied_count()) / (64.0 * 64 * 64);
  EXPECT_NEAR(frac, M_PI * 0.09 * 0.8, 0.01);
}

TEST(Primitive, MugHandleOnPositiveX) {
  const SyntheticShapeSpec mug{Primitive::Mug, {}, {32, 32, 32}};
  EXPECT_TRUE(mug.contains({0, 0, 0}));
  EXPECT_TRUE(mug.contains({0.2 + 0.12, 0, 0}));
  EXPECT_FALSE(mug.contains({-0.2 - 0.12, 0, 0}));
  EXPECT_FALSE(mug.contains({0.25, 0, 0}));
}

TEST(Primitive, ChairHasBackOnNegativeZ) {
  const SyntheticShapeSpec chair{Primitive::Chair, {}, {32, 32, 32}};
  const BinaryVoxelGrid g = voxelize_primitive(chair);
  std::size_t upper_front = 0, upper_back = 0;
  for (int n = 0; n < 32; ++n)
    for (int m = 0; m < 32; ++m)
      for (int l = 0; l < 32; ++l) {
        if (!g(n, m, l) || n < 24) continue;
        (l < 16 ? upper_back : upper_front)++;
      }
  EXPECT_GT(upper_back, 0u);
  EXPECT_EQ(upper_front, 0u);
}

TEST(Primitive, Validation) {
  EXPECT_THROW((SyntheticShapeSpec{Primitive::Sphere, {{"radius", 0.6}}, {}}.validate()),
               std::invalid_argument);
  EXPECT_THROW((SyntheticShapeSpec{Primitive::Box, {{"radius", 0.1}}, {}}.validate()),
               std::invalid_argument);
  EXPECT_THROW((SyntheticShapeSpec{Primitive::Box, {{"sx", -0.1}}, {}}.validate()),
               std::invalid_argument);
  EXPECT_THROW((SyntheticShapeSpec{Primitive::Box, {{"cx", 0.3}}, {}}.validate()),
               std::invalid_argument);
  EXPECT_NO_THROW((SyntheticShapeSpec{Primitive::Mug, {}, {}}.validate()));
  EXPECT_THROW(voxelize_primitive({Primitive::Sphere, {{"radius", 0.7}}, {}}), std::invalid_argument);
  EXPECT_EQ(primitive_from_string("chair"), Primitive::Chair);
  EXPECT_THROW(primitive_from_string("teapot"), std::invalid_argument);
}
