// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_EM_SCENARIO_HPP
#define BDRIS_EM_SCENARIO_HPP

#include <optional>
#include <vector>
#include <Eigen/Core>
#include "bdris/network.hpp"

namespace bdris
{

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kFreeSpaceImpedance = 377.0;  // ohm

// Thin wire dipole parallel to the z-axis.
struct Dipole
{
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double length = 0.0;  // m
  double radius = 0.0;  // m

  // Throws InvalidGeometry unless 0 < radius < length.
  void Validate() const;
  bool operator==(const Dipole &) const = default;
};

struct DerivedConstants
{
  double wavelength;  // m
  double wavenumber;  // rad/m
  double eta0 = kFreeSpaceImpedance;

  static DerivedConstants FromFrequency(double frequency_hz);
};

struct QuadratureOptions
{
  // Gauss-Legendre points per panel and axis.
  int order = 16;
  // Maximum relative change allowed when the order is doubled.
  double relative_tolerance = 1e-6;
  int max_panels_per_half = 64;
};

//
// Mutual impedance between two z-directed thin dipoles with sinusoidal current
// distributions, as the double line integral of the near/far-field kernel over both
// wires. For a == b the lateral distance is replaced by the wire radius, giving the
// self-impedance.
//
// The integral is evaluated with composite Gauss-Legendre quadrature. Each wire is split
// at its feed point (the current has a slope discontinuity there) and each half is cut
// into panels no longer than twice the closest approach between the wires, which keeps
// the near-singular kernel well resolved. The rule is evaluated at `order` and at
// 2 * `order` points per panel; the finer value is returned, and
// QuadratureNotConverged is thrown if the two disagree beyond the tolerance.
//
Complex MutualImpedance(const Dipole &a, const Dipole &b, const DerivedConstants &constants,
                        const QuadratureOptions &quadrature = {});

struct GridLayout
{
  int rows = 1;
  int cols = 1;
  bool operator==(const GridLayout &) const = default;
};

// rows x cols = m with rows <= cols and the pair as close to square as possible.
GridLayout ClosestToSquare(int m);

// Element dipoles on the y-z plane, centroid at the origin, pitch `spacing` along both
// axes. Ordering is row-major with y varying fastest. Throws InvalidGeometry if
// spacing <= 2 * radius or rows * cols != m.
std::vector<Dipole> PlaceRisGrid(int m, double spacing, GridLayout layout, double length,
                                 double radius);

struct ScenarioConfig
{
  double frequency_hz = 28e9;
  Eigen::Vector3d tx_position{5.0, -5.0, 3.0};
  Eigen::Vector3d rx_position{5.0, 5.0, 1.0};
  int elements = 16;
  double spacing_over_lambda = 0.5;
  int group_size = 1;
  std::optional<GridLayout> grid;  // closest-to-square when unset
  int quadrature_order = 16;
  std::optional<Complex> z_rt_override;
  double length_over_lambda = 1.0 / 32.0;
  double radius_over_lambda = 1.0 / 500.0;
  // Tx/Rx dipole dimensions; the surface element dimensions are used when unset.
  std::optional<double> txrx_length_over_lambda;
  std::optional<double> txrx_radius_over_lambda;
  double z0 = kDefaultReferenceImpedance;

  GridLayout Layout() const { return grid.value_or(ClosestToSquare(elements)); }
  // Throws ConfigError on inconsistent values.
  void Validate() const;
};

// z_RI, Z_II and z_IT from the dipole geometry; z_RT = 0 unless overridden. Z_II is
// filled from its upper triangle and mirrored, so it is exactly symmetric.
ChannelTerms BuildScenario(const ScenarioConfig &config,
                           const QuadratureOptions &quadrature_defaults = {});

// Copy with the off-diagonal entries of Z_II (mutual coupling) set to zero.
ChannelTerms Decouple(const ChannelTerms &terms);

struct CouplingSummary
{
  double max_offdiag_abs = 0.0;
  double min_self_resistance = 0.0;
  double max_self_resistance = 0.0;
  double min_self_reactance = 0.0;
  double max_self_reactance = 0.0;
};

CouplingSummary SummarizeCoupling(const ChannelTerms &terms);

}  // namespace bdris

#endif  // BDRIS_EM_SCENARIO_HPP
