// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_TUNABLE_IMPEDANCE_HPP
#define BDRIS_TUNABLE_IMPEDANCE_HPP

#include <span>
#include <string>
#include <vector>
#include "bdris/linalg.hpp"

namespace bdris
{

//
// Circuit topology of the tunable impedance network: M ports split uniformly into G
// fully interconnected groups. G == M is the single-connected (diagonal) surface and
// G == 1 the fully-connected one.
//
class RisArchitecture
{
public:
  // Throws InvalidArchitecture unless M >= 1, G >= 1 and G divides M.
  static RisArchitecture Make(int elements, int groups);

  int Elements() const { return elements_; }
  int Groups() const { return groups_; }
  int GroupSize() const { return elements_ / groups_; }
  bool IsSingleConnected() const { return groups_ == elements_; }
  bool IsFullyConnected() const { return groups_ == 1; }
  // "SC", "FC" or "GC".
  std::string Label() const;

  bool operator==(const RisArchitecture &) const = default;

private:
  RisArchitecture(int elements, int groups) : elements_(elements), groups_(groups) {}

  int elements_;
  int groups_;
};

// Number of free entries of a symmetric n x n block (diagonal plus one triangle).
constexpr int PackedSize(int n)
{
  return n * (n + 1) / 2;
}

// Position of entry (row, col) of a symmetric block in the packed layout. Rows of the
// lower triangle are stored one after another: (0,0), (1,0), (1,1), (2,0), ...
constexpr int PackedIndex(int row, int col)
{
  return row >= col ? row * (row + 1) / 2 + col : col * (col + 1) / 2 + row;
}

//
// Block-diagonal, symmetric, purely imaginary impedance matrix Z_I of a lossless
// reciprocal tunable network. Only the reactances (imaginary parts) of the lower
// triangle of each group block are stored, so the structural constraints hold by
// construction.
//
class TunableImpedance
{
public:
  explicit TunableImpedance(RisArchitecture arch);

  // Builds from per-group packed reactances (ohms).
  TunableImpedance(RisArchitecture arch, std::vector<std::vector<double>> packed);

  // Builds from a diagonal of reactances; valid for every architecture.
  static TunableImpedance FromDiagonal(RisArchitecture arch, std::span<const double> reactance);

  const RisArchitecture &Architecture() const { return arch_; }

  std::span<double> Packed(int group) { return packed_.at(group); }
  std::span<const double> Packed(int group) const { return packed_.at(group); }

  // Reactance of entry (row, col) of group block `group` (local indices).
  double Reactance(int group, int row, int col) const
  {
    return packed_[group][PackedIndex(row, col)];
  }

  // Group block j*X_g as a dense complex matrix.
  ComplexMatrix Block(int group) const;

  // Full M x M matrix with exact zeros outside the group blocks.
  ComplexMatrix Dense() const;

  bool operator==(const TunableImpedance &) const = default;

private:
  RisArchitecture arch_;
  std::vector<std::vector<double>> packed_;
};

}  // namespace bdris

#endif  // BDRIS_TUNABLE_IMPEDANCE_HPP
