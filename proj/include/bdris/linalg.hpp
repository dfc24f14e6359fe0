// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_LINALG_HPP
#define BDRIS_LINALG_HPP

#include <complex>
#include <string>
#include <Eigen/Dense>
#include <json.hpp>

namespace bdris
{

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using ComplexRowVector = Eigen::RowVectorXcd;
using Index = Eigen::Index;

inline constexpr Complex kJ{0.0, 1.0};

// Numerical thresholds shared by the network algebra.
struct NumericOptions
{
  // Systems whose reciprocal condition estimate falls below this are singular.
  double min_rcond = 1e-14;
  // Absolute band used when checking "exactly zero" structural blocks and symmetry.
  double structure_tol = 1e-9;
};

// LU factorization that refuses to exist for numerically singular matrices.
class CheckedLU
{
public:
  CheckedLU(const ComplexMatrix &a, const NumericOptions &opts = {},
            const char *context = "linear system");

  ComplexMatrix Solve(const ComplexMatrix &rhs) const { return lu_.solve(rhs); }
  // Solves X A = rhs.
  ComplexMatrix SolveLeft(const ComplexMatrix &rhs) const;
  ComplexMatrix Inverse() const { return lu_.inverse(); }
  double RCond() const { return rcond_; }

private:
  Eigen::PartialPivLU<ComplexMatrix> lu_;
  double rcond_;
};

// Throws NonFiniteValue if any entry is NaN or infinite.
void RequireFinite(const ComplexMatrix &m, const char *what);

bool IsSymmetric(const ComplexMatrix &m, double tol);

// Induced infinity norm (maximum absolute row sum).
double InfNorm(const ComplexMatrix &m);

// Debug/cache serialization: a matrix is an array of rows, each entry a [re, im] pair.
nlohmann::json ToJson(Complex z);
nlohmann::json ToJson(const ComplexMatrix &m);
Complex ComplexFromJson(const nlohmann::json &j);
ComplexMatrix MatrixFromJson(const nlohmann::json &j);

}  // namespace bdris

#endif  // BDRIS_LINALG_HPP
