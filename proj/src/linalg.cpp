// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include "bdris/linalg.hpp"

#include <cmath>
#include "bdris/errors.hpp"

namespace bdris
{

CheckedLU::CheckedLU(const ComplexMatrix &a, const NumericOptions &opts, const char *context)
{
  if (a.rows() != a.cols())
  {
    throw DimensionMismatch(std::string(context) + ": matrix is not square");
  }
  RequireFinite(a, context);
  lu_.compute(a);
  rcond_ = a.size() == 0 ? 1.0 : lu_.rcond();
  if (!(rcond_ >= opts.min_rcond))
  {
    throw SingularMatrix(std::string(context) + " is numerically singular", rcond_);
  }
}

ComplexMatrix CheckedLU::SolveLeft(const ComplexMatrix &rhs) const
{
  // X A = rhs  <=>  A^T X^T = rhs^T, solved with the existing factorization.
  const ComplexMatrix rhs_t = rhs.transpose();
  ComplexMatrix x_t(lu_.cols(), rhs_t.cols());
  lu_._solve_impl_transposed<false>(rhs_t, x_t);
  return x_t.transpose();
}

void RequireFinite(const ComplexMatrix &m, const char *what)
{
  if (!m.allFinite())
  {
    throw NonFiniteValue(std::string(what) + " contains NaN or Inf entries");
  }
}

bool IsSymmetric(const ComplexMatrix &m, double tol)
{
  if (m.rows() != m.cols())
  {
    return false;
  }
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double InfNorm(const ComplexMatrix &m)
{
  if (m.size() == 0)
  {
    return 0.0;
  }
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

nlohmann::json ToJson(Complex z)
{
  return nlohmann::json::array({z.real(), z.imag()});
}

nlohmann::json ToJson(const ComplexMatrix &m)
{
  auto rows = nlohmann::json::array();
  for (Index i = 0; i < m.rows(); i++)
  {
    auto row = nlohmann::json::array();
    for (Index j = 0; j < m.cols(); j++)
    {
      row.push_back(ToJson(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex ComplexFromJson(const nlohmann::json &j)
{
  if (j.is_number())
  {
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || j.size() != 2)
  {
    throw ConfigError("complex value must be a [re, im] pair, got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

ComplexMatrix MatrixFromJson(const nlohmann::json &j)
{
  if (!j.is_array())
  {
    throw ConfigError("matrix must be an array of rows");
  }
  const auto rows = static_cast<Index>(j.size());
  const auto cols = rows == 0 ? Index{0} : static_cast<Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Index i = 0; i < rows; i++)
  {
    if (static_cast<Index>(j[i].size()) != cols)
    {
      throw ConfigError("matrix rows have unequal length");
    }
    for (Index k = 0; k < cols; k++)
    {
      m(i, k) = ComplexFromJson(j[i][k]);
    }
  }
  RequireFinite(m, "deserialized matrix");
  return m;
}

}  // namespace bdris
