// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <cmath>
#include <numbers>
#include "bdris/em_scenario.hpp"
#include "bdris/errors.hpp"

namespace bdris
{
namespace
{

const DerivedConstants kConstants = DerivedConstants::FromFrequency(28e9);
const double kLambda = kConstants.wavelength;
const double kLength = kLambda / 32.0;
const double kRadius = kLambda / 500.0;

Dipole At(double x, double y, double z)
{
  return {{x, y, z}, kLength, kRadius};
}

// Brute-force midpoint rule for the double integral, written directly from the
// dipole-pair formula (kernel and sinusoidal current weights).
Complex MidpointOracle(const Dipole &a, const Dipole &b, int n)
{
  const double k = kConstants.wavenumber;
  const double eta = kConstants.eta0;
  const double lateral = a == b ? a.radius
                                : std::hypot(a.center.x() - b.center.x(), a.center.y() - b.center.y());
  const double ha = a.length / 2.0;
  const double hb = b.length / 2.0;
  Complex sum = 0.0;
  const double da = a.length / n;
  const double db = b.length / n;
  for (int i = 0; i < n; i++)
  {
    const double za = a.center.z() - ha + (i + 0.5) * da;
    const double wa = std::sin(k * (ha - std::abs(za - a.center.z())));
    for (int j = 0; j < n; j++)
    {
      const double zb = b.center.z() - hb + (j + 0.5) * db;
      const double wb = std::sin(k * (hb - std::abs(zb - b.center.z())));
      const double dz = za - zb;
      const double d = std::sqrt(lateral * lateral + dz * dz);
      const Complex jk(0.0, k);
      const Complex bracket = (dz * dz / (d * d)) * (3.0 / (d * d) + 3.0 * jk / d - k * k) -
                              (jk + 1.0 / d) / d + k * k;
      sum += bracket * std::exp(-jk * d) / d * wa * wb;
    }
  }
  const Complex prefactor = Complex(0.0, eta) / (4.0 * std::numbers::pi * k);
  return prefactor * sum * da * db / (std::sin(k * ha) * std::sin(k * hb));
}

TEST(DerivedConstants, WavelengthTimesFrequency)
{
  EXPECT_NEAR(kConstants.wavelength * 28e9 / kSpeedOfLight, 1.0, 1e-12);
  EXPECT_NEAR(kConstants.wavenumber * kConstants.wavelength, 2.0 * std::numbers::pi, 1e-12);
  EXPECT_EQ(kConstants.eta0, 377.0);
  EXPECT_THROW(DerivedConstants::FromFrequency(0.0), InvalidGeometry);
}

TEST(MutualImpedance, Reciprocal)
{
  const std::vector<std::pair<Dipole, Dipole>> pairs = {
      {At(0, 0, 0), At(0, kLambda / 8, 0)},
      {At(0, -kLambda / 4, kLambda / 4), At(0, kLambda / 4, -kLambda / 4)},
      {At(0, 0, 0), At(0, 0, kLambda / 8)},
      {At(0, 0.001, 0.002), At(5, -5, 3)},
  };
  for (const auto &[a, b] : pairs)
  {
    const Complex ab = MutualImpedance(a, b, kConstants);
    const Complex ba = MutualImpedance(b, a, kConstants);
    EXPECT_LE(std::abs(ab - ba), 1e-10 * std::abs(ab));
  }
}

TEST(MutualImpedance, SelfImpedanceFixture)
{
  const Dipole a = At(0, 0, 0);
  const Complex z = MutualImpedance(a, a, kConstants);
  EXPECT_GT(z.real(), 0.0);
  // Regression fixture recorded from the converged quadrature.
  EXPECT_NEAR(z.real(), 0.19301, 5e-5);
  EXPECT_NEAR(z.imag(), -1510.229, 5e-3);
  QuadratureOptions doubled;
  doubled.order = 32;
  EXPECT_LE(std::abs(MutualImpedance(a, a, kConstants, doubled) - z), 1e-6 * std::abs(z));
}

TEST(MutualImpedance, AgreesWithMidpointOracle)
{
  const std::vector<std::pair<Dipole, Dipole>> pairs = {
      {At(0, 0, 0), At(0, kLambda / 2, 0)},
      {At(0, 0, 0), At(0, kLambda / 8, kLambda / 8)},
      {At(0, 0, 0), At(0, 0, kLambda / 4)},
  };
  for (const auto &[a, b] : pairs)
  {
    const Complex z = MutualImpedance(a, b, kConstants);
    const Complex oracle = MidpointOracle(a, b, 1200);
    EXPECT_LE(std::abs(z - oracle), 1e-5 * std::abs(z)) << z << " vs " << oracle;
  }
}

TEST(MutualImpedance, DecaysWithDistance)
{
  for (double d : {kLambda / 8, kLambda / 4, kLambda / 2})
  {
    const Complex near = MutualImpedance(At(0, 0, 0), At(0, d, 0), kConstants);
    const Complex far = MutualImpedance(At(0, 0, 0), At(0, 2 * d, 0), kConstants);
    EXPECT_LT(std::abs(far), std::abs(near)) << "d = " << d / kLambda << " lambda";
  }
}

TEST(MutualImpedance, Errors)
{
  EXPECT_THROW(MutualImpedance(At(0, 0, 0), At(0, kRadius, 0), kConstants), InvalidGeometry);
  EXPECT_THROW(MutualImpedance(At(0, 0, 0), At(0, 0, kLength / 2), kConstants), InvalidGeometry);
  Dipole bad = At(0, 0, 0);
  bad.radius = 2 * bad.length;
  EXPECT_THROW(MutualImpedance(bad, At(0, kLambda, 0), kConstants), InvalidGeometry);
  QuadratureOptions crude;
  crude.order = 1;
  crude.relative_tolerance = 1e-12;
  EXPECT_THROW(MutualImpedance(At(0, 0, 0), At(0, kLambda / 8, 0), kConstants, crude),
               QuadratureNotConverged);
}

TEST(Grid, ClosestToSquare)
{
  EXPECT_EQ(ClosestToSquare(1), (GridLayout{1, 1}));
  EXPECT_EQ(ClosestToSquare(16), (GridLayout{4, 4}));
  EXPECT_EQ(ClosestToSquare(9), (GridLayout{3, 3}));
  EXPECT_EQ(ClosestToSquare(12), (GridLayout{3, 4}));
  EXPECT_EQ(ClosestToSquare(32), (GridLayout{4, 8}));
  EXPECT_EQ(ClosestToSquare(7), (GridLayout{1, 7}));
}

TEST(Grid, Placement)
{
  const auto one = PlaceRisGrid(1, kLambda / 2, {1, 1}, kLength, kRadius);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].center, Eigen::Vector3d::Zero());

  const double d = kLambda / 2;
  const auto four = PlaceRisGrid(4, d, {2, 2}, kLength, kRadius);
  const std::vector<Eigen::Vector3d> expected = {
      {0, -d / 2, -d / 2}, {0, d / 2, -d / 2}, {0, -d / 2, d / 2}, {0, d / 2, d / 2}};
  for (size_t i = 0; i < 4; i++)
  {
    EXPECT_LT((four[i].center - expected[i]).norm(), 1e-15);
  }

  const auto sixteen = PlaceRisGrid(16, d, {4, 4}, kLength, kRadius);
  double min_distance = 1e9;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < sixteen.size(); i++)
  {
    centroid += sixteen[i].center / 16.0;
    EXPECT_EQ(sixteen[i].center.x(), 0.0);
    for (size_t j = i + 1; j < sixteen.size(); j++)
    {
      min_distance = std::min(min_distance, (sixteen[i].center - sixteen[j].center).norm());
    }
  }
  EXPECT_NEAR(min_distance, d, 1e-15);
  EXPECT_LT(centroid.norm(), 1e-15);

  EXPECT_THROW(PlaceRisGrid(4, 2 * kRadius, {2, 2}, kLength, kRadius), InvalidGeometry);
  EXPECT_THROW(PlaceRisGrid(4, d, {1, 3}, kLength, kRadius), InvalidGeometry);
}

TEST(BuildScenario, SingleElement)
{
  ScenarioConfig c;
  c.elements = 1;
  const ChannelTerms t = BuildScenario(c);
  ASSERT_EQ(t.z_ii.rows(), 1);
  const Dipole a = At(0, 0, 0);
  EXPECT_EQ(t.z_ii(0, 0), MutualImpedance(a, a, kConstants));
  EXPECT_EQ(t.z_rt, Complex(0.0, 0.0));
  EXPECT_EQ(t.z_it(0), MutualImpedance(a, At(5, -5, 3), kConstants));
  EXPECT_EQ(t.z_ri(0), MutualImpedance(At(5, 5, 1), a, kConstants));
}

TEST(BuildScenario, PaperGeometry)
{
  ScenarioConfig c;  // defaults: 28 GHz, Tx (5,-5,3), Rx (5,5,1), M = 16, d = lambda/2
  const ChannelTerms t = BuildScenario(c);
  ASSERT_EQ(t.Elements(), 16);
  EXPECT_EQ(t.z_ii, t.z_ii.transpose());
  for (Index i = 0; i < 16; i++)
  {
    EXPECT_GT(t.z_ii(i, i).real(), 0.0);
  }
  EXPECT_NO_THROW(t.Validate());

  c.z_rt_override = Complex(1e-3, -2e-3);
  EXPECT_EQ(BuildScenario(c).z_rt, Complex(1e-3, -2e-3));
}

TEST(BuildScenario, QuadratureRefinementPerEntry)
{
  ScenarioConfig c;
  c.spacing_over_lambda = 0.125;
  const ChannelTerms base = BuildScenario(c);
  c.quadrature_order = 32;
  const ChannelTerms fine = BuildScenario(c);
  for (Index i = 0; i < 16; i++)
  {
    for (Index j = 0; j < 16; j++)
    {
      EXPECT_LE(std::abs(base.z_ii(i, j) - fine.z_ii(i, j)), 1e-6 * std::abs(fine.z_ii(i, j)));
    }
    EXPECT_LE(std::abs(base.z_it(i) - fine.z_it(i)), 1e-6 * std::abs(fine.z_it(i)));
    EXPECT_LE(std::abs(base.z_ri(i) - fine.z_ri(i)), 1e-6 * std::abs(fine.z_ri(i)));
  }
}

TEST(BuildScenario, CouplingDecreasesWhenSpacingDoubles)
{
  double previous = 0.0;
  for (double d : {0.5, 0.25, 0.125})
  {
    ScenarioConfig c;
    c.spacing_over_lambda = d;
    const double coupling = SummarizeCoupling(BuildScenario(c)).max_offdiag_abs;
    if (previous > 0.0)
    {
      EXPECT_GT(coupling, previous) << "d = " << d;
    }
    previous = coupling;
  }
}

TEST(Decouple, Properties)
{
  ScenarioConfig c;
  c.elements = 4;
  c.spacing_over_lambda = 0.125;
  const ChannelTerms t = BuildScenario(c);
  const ChannelTerms d = Decouple(t);
  for (Index i = 0; i < 4; i++)
  {
    for (Index j = 0; j < 4; j++)
    {
      if (i == j)
      {
        EXPECT_EQ(d.z_ii(i, i), t.z_ii(i, i));
      }
      else
      {
        EXPECT_EQ(d.z_ii(i, j), Complex(0.0, 0.0));
      }
    }
  }
  EXPECT_EQ(d.z_ri, t.z_ri);
  EXPECT_EQ(d.z_it, t.z_it);
  EXPECT_EQ(d.z_rt, t.z_rt);
  EXPECT_EQ(Decouple(d).z_ii, d.z_ii);
  EXPECT_EQ(SummarizeCoupling(d).max_offdiag_abs, 0.0);
}

TEST(ScenarioConfig, Validation)
{
  ScenarioConfig c;
  c.group_size = 3;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.grid = GridLayout{2, 4};
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.elements = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.radius_over_lambda = 1.0;
  EXPECT_THROW(c.Validate(), ConfigError);
}

}  // namespace
}  // namespace bdris
