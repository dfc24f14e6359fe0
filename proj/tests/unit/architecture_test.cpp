// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <cmath>
#include <numbers>
#include <thread>
#include "bdris/architecture.hpp"
#include "bdris/em_scenario.hpp"
#include "bdris/errors.hpp"
#include "test_util.hpp"

namespace bdris
{
namespace
{

using Kind = ImpedanceViolation::Kind;
const Complex kJ(0.0, 1.0);

// Literal three-case index formula with 1-based indices: vec row M̄(m-1)+n
// (entry row n, column m) maps to k = m(m-1)/2 + n for n <= m, to
// k = n(n-1)/2 + m for n > m, and to nothing otherwise.
int LiteralP(int size, int row, int k)
{
  const int m = (row - 1) / size + 1;
  const int n = (row - 1) % size + 1;
  if (n <= m && k == m * (m - 1) / 2 + n)
  {
    return 1;
  }
  if (n > m && k == n * (n - 1) / 2 + m)
  {
    return 1;
  }
  return 0;
}

TEST(RisArchitecture, Make)
{
  const auto sc = RisArchitecture::Make(16, 16);
  EXPECT_TRUE(sc.IsSingleConnected());
  EXPECT_EQ(sc.GroupSize(), 1);
  EXPECT_EQ(sc.Label(), "SC");
  const auto gc = RisArchitecture::Make(16, 4);
  EXPECT_EQ(gc.GroupSize(), 4);
  EXPECT_EQ(gc.Label(), "GC");
  const auto fc = RisArchitecture::Make(16, 1);
  EXPECT_TRUE(fc.IsFullyConnected());
  EXPECT_EQ(fc.Label(), "FC");
  EXPECT_THROW(RisArchitecture::Make(16, 3), InvalidArchitecture);
  EXPECT_THROW(RisArchitecture::Make(0, 1), InvalidArchitecture);
  EXPECT_THROW(RisArchitecture::Make(4, 0), InvalidArchitecture);
}

TEST(TunableImpedance, DenseAndBlocks)
{
  const auto arch = RisArchitecture::Make(4, 2);
  const TunableImpedance z(arch, {{1, 2, 3}, {4, 5, 6}});
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.block(0, 0, 2, 2) << 1.0 * kJ, 2.0 * kJ, 2.0 * kJ, 3.0 * kJ;
  expected.block(2, 2, 2, 2) << 4.0 * kJ, 5.0 * kJ, 5.0 * kJ, 6.0 * kJ;
  EXPECT_EQ(z.Dense(), expected);
  EXPECT_EQ(z.Block(1), expected.block(2, 2, 2, 2));
  EXPECT_EQ(z.Reactance(0, 0, 1), 2.0);
  EXPECT_THROW(TunableImpedance(arch, {{1, 2}, {4, 5, 6}}), DimensionMismatch);

  const std::vector<double> diag = {1, 2, 3, 4};
  const auto fc = TunableImpedance::FromDiagonal(RisArchitecture::Make(4, 1), diag);
  EXPECT_EQ(fc.Dense(), ComplexMatrix(kJ * Eigen::Vector4d(1, 2, 3, 4).cast<Complex>().asDiagonal()));
}

TEST(ValidateImpedance, Examples)
{
  const auto sc = RisArchitecture::Make(3, 3);
  ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
  diag.diagonal() << 10.0 * kJ, -4.0 * kJ, 0.5 * kJ;
  EXPECT_TRUE(ValidateImpedance(diag, sc).Valid());

  std::mt19937_64 rng(3);
  const auto fc = RisArchitecture::Make(3, 1);
  const ComplexMatrix sym = kJ * testing::RandomSymmetric(rng, 3).real().cast<Complex>();
  EXPECT_TRUE(ValidateImpedance(sym, fc).Valid());

  ComplexMatrix bad = sym;
  bad(2, 0) += 1e-3;
  bad(0, 2) += 1e-3;
  const auto report = ValidateImpedance(bad, fc);
  ASSERT_FALSE(report.Valid());
  EXPECT_EQ(report.violation->kind, Kind::kRealPart);
  EXPECT_EQ(report.violation->row, 0);
  EXPECT_EQ(report.violation->col, 2);
}

TEST(ValidateImpedance, ViolationKinds)
{
  const auto gc = RisArchitecture::Make(4, 2);
  std::mt19937_64 rng(4);
  const ComplexMatrix good = testing::RandomTuning(rng, gc).Dense();
  ASSERT_TRUE(ValidateImpedance(good, gc).Valid());

  ComplexMatrix off = good;
  off(1, 2) = 1e-6 * kJ;
  auto r = ValidateImpedance(off, gc);
  ASSERT_FALSE(r.Valid());
  EXPECT_EQ(r.violation->kind, Kind::kOffGroup);
  EXPECT_EQ(r.violation->row, 1);
  EXPECT_EQ(r.violation->col, 2);

  ComplexMatrix asym = good;
  asym(3, 2) += 1e-6 * kJ;
  r = ValidateImpedance(asym, gc);
  ASSERT_FALSE(r.Valid());
  EXPECT_EQ(r.violation->kind, Kind::kAsymmetric);
  EXPECT_EQ(r.violation->row, 2);
  EXPECT_EQ(r.violation->col, 3);

  ComplexMatrix nan = good;
  nan(0, 0) = Complex(0.0, std::nan(""));
  EXPECT_EQ(ValidateImpedance(nan, gc).violation->kind, Kind::kNonFinite);
  EXPECT_EQ(ValidateImpedance(ComplexMatrix::Zero(3, 3), gc).violation->kind, Kind::kDimension);

  // Entries below the tolerance are accepted.
  ComplexMatrix tiny = good;
  tiny(0, 3) = 1e-13;
  EXPECT_TRUE(ValidateImpedance(tiny, gc).Valid());
}

TEST(SymmetryMap, Examples)
{
  EXPECT_EQ(SymmetryMap(1).Dense(), Eigen::MatrixXd::Ones(1, 1));
  Eigen::MatrixXd p2(4, 3);
  p2 << 1, 0, 0,  //
      0, 1, 0,    //
      0, 1, 0,    //
      0, 0, 1;
  EXPECT_EQ(SymmetryMap(2).Dense(), p2);
  EXPECT_THROW(SymmetryMap(0), InvalidArchitecture);
}

TEST(SymmetryMap, MatchesLiteralFormulaExhaustively)
{
  for (int size = 1; size <= 8; size++)
  {
    const Eigen::MatrixXd p = SymmetryMap(size).Dense();
    ASSERT_EQ(p.rows(), size * size);
    ASSERT_EQ(p.cols(), PackedSize(size));
    for (int row = 1; row <= size * size; row++)
    {
      for (int k = 1; k <= PackedSize(size); k++)
      {
        ASSERT_EQ(p(row - 1, k - 1), LiteralP(size, row, k))
            << "size " << size << " row " << row << " col " << k;
      }
    }
    EXPECT_EQ(p.rowwise().sum(), Eigen::VectorXd::Ones(size * size));
    for (int m = 1; m <= size; m++)
    {
      for (int n = 1; n <= m; n++)
      {
        const int k = m * (m - 1) / 2 + n;
        EXPECT_EQ(p.col(k - 1).sum(), n == m ? 1.0 : 2.0);
      }
    }
  }
}

TEST(SymmetryMap, MemoizedAndThreadSafe)
{
  const auto a = SymmetryMap::Get(5);
  EXPECT_EQ(a, SymmetryMap::Get(5));
  std::vector<std::thread> threads;
  std::vector<std::shared_ptr<const SymmetryMap>> seen(8);
  for (int t = 0; t < 8; t++)
  {
    threads.emplace_back([&seen, t] { seen[t] = SymmetryMap::Get(1 + t % 4); });
  }
  for (auto &t : threads)
  {
    t.join();
  }
  for (int t = 0; t < 8; t++)
  {
    EXPECT_EQ(seen[t], SymmetryMap::Get(1 + t % 4));
    EXPECT_EQ(seen[t]->GroupSize(), 1 + t % 4);
  }
}

TEST(SymmetryMap, RightMultiplyMatchesDense)
{
  std::mt19937_64 rng(5);
  for (int size = 1; size <= 6; size++)
  {
    const SymmetryMap p(size);
    const ComplexRowVector e = testing::RandomMatrix(rng, 1, size * size).row(0);
    const ComplexRowVector expected = e * p.Dense().cast<Complex>();
    EXPECT_LT((p.RightMultiply(e) - expected).norm(), 1e-14 * expected.norm());
  }
}

TEST(ExpandIncrement, Examples)
{
  const double d = 0.25;
  const SymmetryMap p(2);
  ComplexVector ones = ComplexVector::Constant(3, d);
  EXPECT_EQ(ExpandIncrement(ones, p), ComplexMatrix::Constant(2, 2, d));
  ComplexVector w(3);
  w << d, kJ * d, -d;
  ComplexMatrix expected(2, 2);
  expected << d, kJ * d, kJ * d, -d;
  EXPECT_EQ(ExpandIncrement(w, p), expected);
  EXPECT_THROW(ExpandIncrement(ComplexVector::Ones(4), p), DimensionMismatch);
}

TEST(ExpandIncrement, RoundTripAndConstantModulus)
{
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  const double delta = 6e-4;
  for (int size = 1; size <= 6; size++)
  {
    const SymmetryMap p(size);
    ComplexVector w(PackedSize(size));
    for (auto &x : w)
    {
      x = std::polar(delta, phase(rng));
    }
    const ComplexMatrix omega = ExpandIncrement(w, p);
    EXPECT_EQ(omega, omega.transpose());
    for (int r = 0; r < size; r++)
    {
      for (int c = 0; c <= r; c++)
      {
        EXPECT_EQ(omega(r, c), w(PackedIndex(r, c)));
        EXPECT_NEAR(std::abs(omega(r, c)), delta, 1e-18);
      }
    }
    // vec(Omega) equals P omega.
    const ComplexVector vec = Eigen::Map<const ComplexVector>(omega.data(), size * size);
    EXPECT_EQ(vec, p.Dense().cast<Complex>() * w);
  }
}

TEST(AssembleBlockDiagonal, Examples)
{
  const std::vector<ComplexMatrix> ids(3, ComplexMatrix::Identity(2, 2));
  EXPECT_EQ(AssembleBlockDiagonal(ids), ComplexMatrix::Identity(6, 6));
  std::mt19937_64 rng(7);
  const ComplexMatrix one = testing::RandomMatrix(rng, 3, 3);
  EXPECT_EQ(AssembleBlockDiagonal({one}), one);

  const ComplexMatrix b1 = testing::RandomMatrix(rng, 2, 2);
  const ComplexMatrix b2 = testing::RandomMatrix(rng, 2, 2);
  const ComplexMatrix full = AssembleBlockDiagonal({b1, b2});
  EXPECT_EQ(full.block(0, 0, 2, 2), b1);
  EXPECT_EQ(full.block(2, 2, 2, 2), b2);
  int zeros = 0;
  for (int r = 0; r < 4; r++)
  {
    for (int c = 0; c < 4; c++)
    {
      if (r / 2 != c / 2)
      {
        EXPECT_EQ(full(r, c), Complex(0.0, 0.0));
        zeros++;
      }
    }
  }
  EXPECT_EQ(zeros, 8);
  EXPECT_THROW(AssembleBlockDiagonal({b1, one}), DimensionMismatch);
}

// Gain of a single decoupled element with reactance x.
double SingleGain(const ChannelTerms &t, double x)
{
  return std::norm(t.z_rt - t.z_ri(0) * t.z_it(0) / (t.z_ii(0, 0) + Complex(0.0, x)));
}

TEST(InitNoMc, SingleElementMatchesDenseGrid)
{
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; trial++)
  {
    ChannelTerms t = testing::RandomTerms(rng, 1);
    if (trial == 0)
    {
      t.z_rt = 0.0;
    }
    const auto arch = RisArchitecture::Make(1, 1);
    const TunableImpedance z = InitNoMc(t, arch);
    const double gain = ChannelGain(t, z);
    // Dense grid over x = R tan(beta), beta in (-pi/2, pi/2), covering all reactances.
    const double r = t.z_ii(0, 0).real();
    double best = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; i++)
    {
      const double beta = -std::numbers::pi / 2 + std::numbers::pi * (i + 0.5) / n;
      const double x = r * std::tan(beta) - t.z_ii(0, 0).imag();
      best = std::max(best, SingleGain(t, x));
    }
    EXPECT_GE(gain, best * (1.0 - 1e-3)) << "trial " << trial;
    EXPECT_LE(gain, best * (1.0 + 1e-6)) << "trial " << trial;
  }
}

TEST(InitNoMc, MirrorSymmetricScenario)
{
  ScenarioConfig c;
  c.elements = 2;
  c.grid = GridLayout{1, 2};
  c.spacing_over_lambda = 0.25;
  // Tx and Rx in the mirror plane y = 0 of the two elements at y = +/- d/2.
  c.tx_position = {5.0, 0.0, 3.0};
  c.rx_position = {4.0, 0.0, -1.0};
  const ChannelTerms t = BuildScenario(c);
  const auto z = InitNoMc(t, RisArchitecture::Make(2, 2));
  EXPECT_NEAR(z.Reactance(0, 0, 0), z.Reactance(1, 0, 0), 1e-9 * std::abs(z.Reactance(0, 0, 0)));
}

TEST(InitNoMc, ValidUnderEveryArchitecture)
{
  std::mt19937_64 rng(9);
  const ChannelTerms t = testing::RandomTerms(rng, 8);
  for (int groups : {1, 2, 4, 8})
  {
    const auto arch = RisArchitecture::Make(8, groups);
    const TunableImpedance z = InitNoMc(t, arch);
    EXPECT_TRUE(ValidateImpedance(z.Dense(), arch).Valid());
    EXPECT_EQ(z.Dense(), InitNoMc(t, RisArchitecture::Make(8, 8)).Dense());
  }
  ChannelTerms bad = t;
  bad.z_ii(3, 3) = Complex(0.0, bad.z_ii(3, 3).imag());
  EXPECT_THROW(InitNoMc(bad, RisArchitecture::Make(8, 8)), InvalidImpedance);
  EXPECT_THROW(InitNoMc(t, RisArchitecture::Make(4, 4)), DimensionMismatch);
}

TEST(TunableImpedanceJson, RoundTrip)
{
  std::mt19937_64 rng(10);
  const auto arch = RisArchitecture::Make(6, 2);
  const TunableImpedance z = testing::RandomTuning(rng, arch);
  const auto j = ToJson(z);
  EXPECT_EQ(j.at("M"), 6);
  EXPECT_EQ(j.at("G"), 2);
  EXPECT_EQ(j.at("blocks").size(), 2u);
  EXPECT_EQ(j.at("blocks")[0].size(), 6u);
  EXPECT_EQ(TunableImpedanceFromJson(nlohmann::json::parse(j.dump())), z);
  EXPECT_THROW(TunableImpedanceFromJson(nlohmann::json::parse(R"({"M": 6, "G": 4, "blocks": []})")),
               ConfigError);
  EXPECT_THROW(TunableImpedanceFromJson(nlohmann::json::parse(R"({"M": 2, "G": 1, "blocks": [[1]]})")),
               ConfigError);
}

}  // namespace
}  // namespace bdris
