// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_NETWORK_HPP
#define BDRIS_NETWORK_HPP

#include "bdris/linalg.hpp"
#include "bdris/tunable_impedance.hpp"

namespace bdris
{

//
// Multiport description of a link with N transmit antennas, an M-element surface and K
// receive antennas. Ports are ordered transmitter, surface, receiver; L = N + M + K.
//

inline constexpr double kDefaultReferenceImpedance = 50.0;

enum class Part
{
  kTx,
  kRis,
  kRx
};

struct PortCounts
{
  Index tx = 1;
  Index ris = 1;
  Index rx = 1;

  Index Total() const { return tx + ris + rx; }
  Index Size(Part p) const;
  Index Offset(Part p) const;
};

// An L x L port matrix viewed as the nine (Tx, Ris, Rx) x (Tx, Ris, Rx) blocks.
class PartitionedMatrix
{
public:
  PartitionedMatrix() = default;
  // Zero matrix with the given partition.
  explicit PartitionedMatrix(PortCounts ports);
  // Throws DimensionMismatch if `full` is not L x L, NonFiniteValue on NaN/Inf.
  PartitionedMatrix(PortCounts ports, ComplexMatrix full);

  const PortCounts &Ports() const { return ports_; }
  const ComplexMatrix &Full() const { return full_; }

  Eigen::Block<ComplexMatrix> Block(Part row, Part col);
  Eigen::Block<const ComplexMatrix> Block(Part row, Part col) const;

private:
  PortCounts ports_;
  ComplexMatrix full_;
};

struct ImpedanceParams
{
  PartitionedMatrix z;
  double z0 = kDefaultReferenceImpedance;
  // When set, Validate() also checks Z_II = Z_II^T.
  bool reciprocal = false;

  void Validate(const NumericOptions &opts = {}) const;
};

struct ScatteringParams
{
  PartitionedMatrix s;
  double z0 = kDefaultReferenceImpedance;
};

// Single-antenna transmitter and receiver: the scalar/vector blocks of the impedance
// channel model.
struct ChannelTerms
{
  Complex z_rt{0.0, 0.0};
  ComplexRowVector z_ri;  // 1 x M
  ComplexMatrix z_ii;     // M x M
  ComplexVector z_it;     // M x 1
  double z0 = kDefaultReferenceImpedance;

  Index Elements() const { return z_ii.rows(); }

  // Dimensions, finiteness, symmetry of Z_II and positive self resistances.
  void Validate(const NumericOptions &opts = {}) const;
};

// Assembles the full SISO impedance matrix with matched, uncoupled Tx/Rx ports and no
// reverse links.
ImpedanceParams ToImpedanceParams(const ChannelTerms &terms);

// (Z + Z0 I)^-1 (Z - Z0 I).
ComplexMatrix ReflectionMatrix(const ComplexMatrix &z_term, double z0,
                               const NumericOptions &opts = {});

// Reflection matrix of the tunable network. Computed group by group, so entries outside
// the group blocks are exact zeros.
ComplexMatrix ThetaFromImpedance(const TunableImpedance &z_i, double z0,
                                 const NumericOptions &opts = {});

// Inverse of ThetaFromImpedance: Z0 (I + Theta)(I - Theta)^-1 with real parts dropped.
// Throws ThetaNearIdentity if an eigenvalue of a group block lies within
// `identity_distance` of +1, InvalidImpedance if Theta is not symmetric, unitary and
// block diagonal for `arch`.
TunableImpedance ImpedanceFromTheta(const ComplexMatrix &theta, const RisArchitecture &arch,
                                    double z0, double identity_distance = 1e-6,
                                    const NumericOptions &opts = {});

// Full L x L conversion S = (Z + Z0 I)^-1 (Z - Z0 I).
ScatteringParams SFromZ(const ImpedanceParams &z, const NumericOptions &opts = {});

// Closed-form block conversion valid when Z_TI = Z_TR = Z_IR = 0 and
// Z_TT = Z0 I, Z_RR = Z0 I. Blocks that vanish under those assumptions are set to zero.
ScatteringParams SBlocksFromZBlocks(const ImpedanceParams &z, const NumericOptions &opts = {});

// General channel with arbitrary terminations:
//   H = (Gamma_R + I)^-1 T_RT (I + Gamma_T T_TT + T_TT)^-1,  T = S (I - Gamma S)^-1.
ComplexMatrix ChannelGeneral(const ScatteringParams &s, const ComplexMatrix &gamma_t,
                             const ComplexMatrix &theta, const ComplexMatrix &gamma_r,
                             const NumericOptions &opts = {});

// H = S_RT + S_RI (I - Theta S_II)^-1 Theta S_IT.
ComplexMatrix ChannelScattering(const ScatteringParams &s, const ComplexMatrix &theta,
                                const NumericOptions &opts = {});

// H = (Z_RT - Z_RI (Z_II + Z_I)^-1 Z_IT) / (2 Z0).
ComplexMatrix ChannelImpedance(const ImpedanceParams &z, const ComplexMatrix &z_i,
                               const NumericOptions &opts = {});
Complex ChannelImpedance(const ChannelTerms &terms, const ComplexMatrix &z_i,
                         const NumericOptions &opts = {});

// |z_RT - z_RI (Z_II + Z_I)^-1 z_IT|^2. The 1/(2 Z0) factor of the channel is not
// included.
double ChannelGain(const ChannelTerms &terms, const ComplexMatrix &z_i,
                   const NumericOptions &opts = {});
double ChannelGain(const ChannelTerms &terms, const TunableImpedance &z_i,
                   const NumericOptions &opts = {});

}  // namespace bdris

#endif  // BDRIS_NETWORK_HPP
