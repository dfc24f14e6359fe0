// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_ARCHITECTURE_HPP
#define BDRIS_ARCHITECTURE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>
#include "bdris/linalg.hpp"
#include "bdris/network.hpp"
#include "bdris/tunable_impedance.hpp"

namespace bdris
{

//
// Structural checks for a dense candidate Z_I.
//
struct ImpedanceViolation
{
  enum class Kind
  {
    kDimension,
    kNonFinite,
    kOffGroup,
    kAsymmetric,
    kRealPart,
  };
  Kind kind;
  Index row = 0;
  Index col = 0;
  std::string message;
};

struct ValidationReport
{
  std::optional<ImpedanceViolation> violation;

  bool Valid() const { return !violation.has_value(); }
};

inline constexpr double kImpedanceStructureTol = 1e-12;

// Checks block-diagonal sparsity, per-block symmetry and vanishing real parts, each at
// absolute tolerance `tol`, scanning row-major and reporting the first violating entry.
ValidationReport ValidateImpedance(const ComplexMatrix &z_i, const RisArchitecture &arch,
                                   double tol = kImpedanceStructureTol);

//
// Binary map P between vec(Omega_g) (column-major, M̄^2 entries) and the packed vector of
// free symmetric entries omega_g (M̄(M̄+1)/2 entries): vec(Omega_g) = P omega_g.
// Vec position m * M̄ + n holds entry (n, m); its packed index is PackedIndex(n, m).
//
class SymmetryMap
{
public:
  explicit SymmetryMap(int group_size);

  // Memoized, thread-safe lookup.
  static std::shared_ptr<const SymmetryMap> Get(int group_size);

  int GroupSize() const { return group_size_; }
  int PackedSize() const { return bdris::PackedSize(group_size_); }
  // Packed column hit by each vec row.
  const std::vector<int> &RowToColumn() const { return row_to_col_; }
  // Dense M̄^2 x M̄(M̄+1)/2 0/1 matrix.
  Eigen::MatrixXd Dense() const;

  // Row vector e (1 x M̄^2) times P.
  ComplexRowVector RightMultiply(const ComplexRowVector &e) const;

private:
  int group_size_;
  std::vector<int> row_to_col_;
};

// Omega_g = unvec(P omega_g). Throws DimensionMismatch unless omega has
// M̄(M̄+1)/2 entries.
ComplexMatrix ExpandIncrement(const ComplexVector &omega, const SymmetryMap &p);

// blkdiag(blocks...). Throws DimensionMismatch if the blocks are not all square with a
// common size.
ComplexMatrix AssembleBlockDiagonal(const std::vector<ComplexMatrix> &blocks);

//
// Initial point: the optimal diagonal (single-connected) tuning for the channel with the
// mutual coupling terms of Z_II removed. The decoupled problem is solved in closed form,
// so the result is the global optimum of that problem and is deterministic. The diagonal
// is a valid tuning under every architecture.
//
// With z_mm = R_m + j X_m and c_m = [z_RI]_m [z_IT]_m / R_m, the tuning
// x_m = R_m tan(beta_m) - X_m turns element m's contribution into
// (c_m / 2)(1 + exp(-2j beta_m)); all rotating parts are aligned with
// z_RT - sum_m c_m / 2, giving |h| = |z_RT - sum c / 2| + sum |c| / 2.
//
// Throws InvalidImpedance if a self resistance is not positive.
TunableImpedance InitNoMc(const ChannelTerms &terms, const RisArchitecture &arch);

// {"M": .., "G": .., "blocks": [[packed reactances], ...]}.
nlohmann::json ToJson(const TunableImpedance &z_i);
// Re-validates dimensions and finiteness; throws ConfigError.
TunableImpedance TunableImpedanceFromJson(const nlohmann::json &j);

}  // namespace bdris

#endif  // BDRIS_ARCHITECTURE_HPP
