// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include "bdris/errors.hpp"
#include "bdris/linalg.hpp"
#include "test_util.hpp"

namespace bdris
{
namespace
{

TEST(CheckedLU, SolvesBothSides)
{
  std::mt19937_64 rng(1);
  const ComplexMatrix a = testing::RandomMatrix(rng, 5, 5) + 5.0 * ComplexMatrix::Identity(5, 5);
  const ComplexMatrix rhs = testing::RandomMatrix(rng, 5, 2);
  const CheckedLU lu(a);
  EXPECT_LT((a * lu.Solve(rhs) - rhs).norm(), 1e-12);
  const ComplexMatrix left = testing::RandomMatrix(rng, 3, 5);
  EXPECT_LT((lu.SolveLeft(left) * a - left).norm(), 1e-12);
  EXPECT_LT((lu.Inverse() * a - ComplexMatrix::Identity(5, 5)).norm(), 1e-12);
}

TEST(CheckedLU, RejectsSingularMatrix)
{
  ComplexMatrix a = ComplexMatrix::Ones(3, 3);
  EXPECT_THROW(CheckedLU{a}, SingularMatrix);
  a = ComplexMatrix::Identity(3, 3);
  a(2, 2) = 1e-18;
  EXPECT_THROW(CheckedLU{a}, SingularMatrix);
  try
  {
    CheckedLU lu(a);
  }
  catch (const SingularMatrix &e)
  {
    EXPECT_LT(e.rcond(), 1e-14);
  }
}

TEST(CheckedLU, RejectsNonSquareAndNonFinite)
{
  EXPECT_THROW(CheckedLU{ComplexMatrix::Identity(2, 3)}, DimensionMismatch);
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(0, 1) = Complex(std::nan(""), 0.0);
  EXPECT_THROW(CheckedLU{a}, NonFiniteValue);
}

TEST(Linalg, SymmetryAndNorm)
{
  ComplexMatrix m(2, 2);
  m << Complex(1, 1), Complex(2, -1), Complex(2, -1), Complex(3, 0);
  EXPECT_TRUE(IsSymmetric(m, 0.0));
  m(0, 1) += 1e-6;
  EXPECT_FALSE(IsSymmetric(m, 1e-9));
  EXPECT_TRUE(IsSymmetric(m, 1e-5));
  ComplexMatrix n(2, 2);
  n << Complex(3, 4), 1.0, -2.0, Complex(0, -1);
  EXPECT_DOUBLE_EQ(InfNorm(n), 6.0);
}

TEST(Linalg, JsonRoundTrip)
{
  std::mt19937_64 rng(2);
  const ComplexMatrix m = testing::RandomMatrix(rng, 3, 4);
  const auto j = ToJson(m);
  ASSERT_EQ(j.size(), 3u);
  ASSERT_EQ(j[0].size(), 4u);
  EXPECT_EQ(j[1][2][0].get<double>(), m(1, 2).real());
  EXPECT_EQ(j[1][2][1].get<double>(), m(1, 2).imag());
  // Text round trip is exact.
  EXPECT_EQ(MatrixFromJson(nlohmann::json::parse(j.dump())), m);
  EXPECT_EQ(ComplexFromJson(nlohmann::json::parse("[1.5, -2]")), Complex(1.5, -2.0));
  EXPECT_EQ(ComplexFromJson(nlohmann::json::parse("3")), Complex(3.0, 0.0));
  EXPECT_THROW(ComplexFromJson(nlohmann::json::parse("[1, 2, 3]")), ConfigError);
  EXPECT_THROW(MatrixFromJson(nlohmann::json::parse("[[[1,0]], [[1,0],[2,0]]]")), ConfigError);
}

}  // namespace
}  // namespace bdris
