// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_ORACLE_HPP
#define BDRIS_ORACLE_HPP

#include <vector>
#include "bdris/architecture.hpp"
#include "bdris/network.hpp"

namespace bdris
{

struct OracleOptions
{
  // Grid points per angle of the initial uniform grid.
  int resolution = 64;
  // Number of well-separated initial grid points that are refined.
  int candidates = 8;
  // Zoom levels; each halves the box around the incumbent.
  int zoom_levels = 48;
  // Points per axis of each zoom grid.
  int zoom_points = 9;
  // Upper bound on the number of points of the initial grid.
  long max_grid_points = 4'000'000;
  // Sample each eigen-angle through theta = 2 atan2(Z0, X_c + R_c tan(u)) with u uniform,
  // where R_c and -X_c are the mean self resistance and reactance. This concentrates the
  // grid near the element resonance, whose gain peak is far narrower than a uniform
  // angle cell. With false the angles themselves are sampled uniformly.
  bool resonance_warp = true;
};

struct OracleResult
{
  explicit OracleResult(TunableImpedance best) : z_i(std::move(best)) {}

  TunableImpedance z_i;
  double gain = 0.0;
  // Angles of the best point: per group, phi (M̄ = 1) or (theta1, theta2, psi) (M̄ = 2).
  std::vector<double> angles;
  long evaluations = 0;
};

//
// Independent brute-force reference for small surfaces. Each group block of the
// reflection matrix is parameterized as a symmetric unitary matrix:
//   M̄ = 1: theta = exp(j phi), phi in [0, 2 pi);
//   M̄ = 2: Theta_g = R(psi) diag(exp(j theta1), exp(j theta2)) R(psi)^T,
//          (theta1, theta2, psi) in [0, 2 pi)^2 x [0, pi),
// and mapped to Z_I; points with an eigenvalue within 1e-6 of +1 are skipped. The
// gain has very narrow resonant peaks in these angles, so the best points of a uniform
// grid are refined by repeated zoom grids and a final golden-section pass along each
// angle.
//
// Throws CostGuard if M > 4, InvalidArchitecture if M̄ > 2.
//
OracleResult OracleSearch(const ChannelTerms &terms, const RisArchitecture &arch,
                          const OracleOptions &options = {});

// Maps oracle angles to the tuning (exposed for tests).
TunableImpedance TuningFromAngles(const RisArchitecture &arch, const std::vector<double> &angles,
                                  double z0);

// Theta_g for the same angles; the oracle's tuning equals ImpedanceFromTheta of this.
ComplexMatrix ThetaFromAngles(const RisArchitecture &arch, const std::vector<double> &angles);

}  // namespace bdris

#endif  // BDRIS_ORACLE_HPP
