// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include "bdris/network.hpp"

#include <cmath>
#include <Eigen/Eigenvalues>
#include "bdris/errors.hpp"

namespace bdris
{

namespace
{

void RequirePositiveZ0(double z0)
{
  if (!(z0 > 0.0) || !std::isfinite(z0))
  {
    throw Error("reference impedance must be positive and finite");
  }
}

ComplexMatrix Identity(Index n)
{
  return ComplexMatrix::Identity(n, n);
}

}  // namespace

Index PortCounts::Size(Part p) const
{
  switch (p)
  {
    case Part::kTx:
      return tx;
    case Part::kRis:
      return ris;
    case Part::kRx:
      return rx;
  }
  return 0;
}

Index PortCounts::Offset(Part p) const
{
  switch (p)
  {
    case Part::kTx:
      return 0;
    case Part::kRis:
      return tx;
    case Part::kRx:
      return tx + ris;
  }
  return 0;
}

PartitionedMatrix::PartitionedMatrix(PortCounts ports)
  : ports_(ports), full_(ComplexMatrix::Zero(ports.Total(), ports.Total()))
{
}

PartitionedMatrix::PartitionedMatrix(PortCounts ports, ComplexMatrix full)
  : ports_(ports), full_(std::move(full))
{
  if (full_.rows() != ports_.Total() || full_.cols() != ports_.Total())
  {
    throw DimensionMismatch("port matrix must be L x L with L = N + M + K");
  }
  RequireFinite(full_, "port matrix");
}

Eigen::Block<ComplexMatrix> PartitionedMatrix::Block(Part row, Part col)
{
  return full_.block(ports_.Offset(row), ports_.Offset(col), ports_.Size(row), ports_.Size(col));
}

Eigen::Block<const ComplexMatrix> PartitionedMatrix::Block(Part row, Part col) const
{
  return full_.block(ports_.Offset(row), ports_.Offset(col), ports_.Size(row), ports_.Size(col));
}

void ImpedanceParams::Validate(const NumericOptions &opts) const
{
  RequirePositiveZ0(z0);
  RequireFinite(z.Full(), "impedance matrix");
  if (reciprocal && !IsSymmetric(z.Block(Part::kRis, Part::kRis), opts.structure_tol))
  {
    throw Error("Z_II is not symmetric although the network is flagged reciprocal");
  }
}

void ChannelTerms::Validate(const NumericOptions &opts) const
{
  RequirePositiveZ0(z0);
  const Index m = z_ii.rows();
  if (m < 1 || z_ii.cols() != m || z_ri.size() != m || z_it.size() != m)
  {
    throw DimensionMismatch("channel terms: z_RI, Z_II and z_IT must agree on M");
  }
  RequireFinite(z_ii, "Z_II");
  RequireFinite(z_ri, "z_RI");
  RequireFinite(z_it, "z_IT");
  if (!std::isfinite(z_rt.real()) || !std::isfinite(z_rt.imag()))
  {
    throw NonFiniteValue("z_RT is not finite");
  }
  if (!IsSymmetric(z_ii, opts.structure_tol))
  {
    throw Error("Z_II is not symmetric (reciprocal surface expected)");
  }
  for (Index i = 0; i < m; i++)
  {
    if (!(z_ii(i, i).real() > 0.0))
    {
      throw Error("Z_II diagonal entry " + std::to_string(i) +
                  " has non-positive resistance");
    }
  }
}

ImpedanceParams ToImpedanceParams(const ChannelTerms &terms)
{
  const PortCounts ports{1, terms.Elements(), 1};
  ImpedanceParams z{PartitionedMatrix(ports), terms.z0, true};
  z.z.Block(Part::kTx, Part::kTx)(0, 0) = terms.z0;
  z.z.Block(Part::kRx, Part::kRx)(0, 0) = terms.z0;
  z.z.Block(Part::kRx, Part::kTx)(0, 0) = terms.z_rt;
  z.z.Block(Part::kRx, Part::kRis) = terms.z_ri;
  z.z.Block(Part::kRis, Part::kRis) = terms.z_ii;
  z.z.Block(Part::kRis, Part::kTx) = terms.z_it;
  return z;
}

ComplexMatrix ReflectionMatrix(const ComplexMatrix &z_term, double z0, const NumericOptions &opts)
{
  RequirePositiveZ0(z0);
  const Index n = z_term.rows();
  const CheckedLU lu(z_term + z0 * Identity(n), opts, "Z + Z0 I");
  return lu.Solve(z_term - z0 * Identity(n));
}

ComplexMatrix ThetaFromImpedance(const TunableImpedance &z_i, double z0, const NumericOptions &opts)
{
  const auto &arch = z_i.Architecture();
  const int size = arch.GroupSize();
  ComplexMatrix theta = ComplexMatrix::Zero(arch.Elements(), arch.Elements());
  for (int g = 0; g < arch.Groups(); g++)
  {
    theta.block(g * size, g * size, size, size) = ReflectionMatrix(z_i.Block(g), z0, opts);
  }
  return theta;
}

TunableImpedance ImpedanceFromTheta(const ComplexMatrix &theta, const RisArchitecture &arch,
                                    double z0, double identity_distance,
                                    const NumericOptions &opts)
{
  RequirePositiveZ0(z0);
  const int m = arch.Elements();
  const int size = arch.GroupSize();
  if (theta.rows() != m || theta.cols() != m)
  {
    throw DimensionMismatch("Theta must be M x M");
  }
  RequireFinite(theta, "Theta");
  if (!IsSymmetric(theta, opts.structure_tol))
  {
    throw InvalidImpedance("Theta is not symmetric");
  }
  if (((theta.adjoint() * theta) - Identity(m)).norm() > opts.structure_tol * m)
  {
    throw InvalidImpedance("Theta is not unitary");
  }

  TunableImpedance z_i(arch);
  for (int g = 0; g < arch.Groups(); g++)
  {
    for (int r = 0; r < m; r++)
    {
      for (int c = g * size; c < (g + 1) * size; c++)
      {
        if (r / size != g && std::abs(theta(r, c)) > opts.structure_tol)
        {
          throw InvalidImpedance("Theta has nonzero entries outside the group blocks");
        }
      }
    }
    const ComplexMatrix block = theta.block(g * size, g * size, size, size);
    const Eigen::ComplexEigenSolver<ComplexMatrix> eig(block, false);
    for (Index k = 0; k < eig.eigenvalues().size(); k++)
    {
      if (std::abs(eig.eigenvalues()(k) - 1.0) < identity_distance)
      {
        throw ThetaNearIdentity("Theta has an eigenvalue within " +
                                std::to_string(identity_distance) +
                                " of +1; the impedance diverges");
      }
    }
    // (I + Theta) and (I - Theta) commute, so the order of the product is immaterial.
    const CheckedLU lu(Identity(size) - block, opts, "I - Theta");
    const ComplexMatrix z_block = z0 * lu.Solve(Identity(size) + block);
    auto packed = z_i.Packed(g);
    for (int r = 0; r < size; r++)
    {
      for (int c = 0; c <= r; c++)
      {
        packed[PackedIndex(r, c)] = 0.5 * (z_block(r, c).imag() + z_block(c, r).imag());
      }
    }
  }
  return z_i;
}

ScatteringParams SFromZ(const ImpedanceParams &z, const NumericOptions &opts)
{
  z.Validate(opts);
  return {PartitionedMatrix(z.z.Ports(), ReflectionMatrix(z.z.Full(), z.z0, opts)), z.z0};
}

ScatteringParams SBlocksFromZBlocks(const ImpedanceParams &z, const NumericOptions &opts)
{
  z.Validate(opts);
  const auto &ports = z.z.Ports();
  const double z0 = z.z0;
  const double tol = opts.structure_tol;

  auto require_small = [tol](double norm, const char *what) {
    if (norm > tol)
    {
      throw AssumptionViolation(std::string(what) + " must vanish (norm " +
                                std::to_string(norm) + ")");
    }
  };
  require_small(z.z.Block(Part::kTx, Part::kRis).norm(), "Z_TI");
  require_small(z.z.Block(Part::kTx, Part::kRx).norm(), "Z_TR");
  require_small(z.z.Block(Part::kRis, Part::kRx).norm(), "Z_IR");
  require_small((z.z.Block(Part::kTx, Part::kTx) - z0 * Identity(ports.tx)).norm(),
                "Z_TT - Z0 I");
  require_small((z.z.Block(Part::kRx, Part::kRx) - z0 * Identity(ports.rx)).norm(),
                "Z_RR - Z0 I");

  const ComplexMatrix z_ii = z.z.Block(Part::kRis, Part::kRis);
  const ComplexMatrix z_ri = z.z.Block(Part::kRx, Part::kRis);
  const ComplexMatrix z_it = z.z.Block(Part::kRis, Part::kTx);
  const ComplexMatrix z_rt = z.z.Block(Part::kRx, Part::kTx);
  const Index m = ports.ris;

  const CheckedLU lu(z_ii + z0 * Identity(m), opts, "Z_II + Z0 I");
  const ComplexMatrix s_ii = lu.Solve(z_ii - z0 * Identity(m));
  const ComplexMatrix s_it = lu.Solve(z_it);

  ScatteringParams s{PartitionedMatrix(ports), z0};
  s.s.Block(Part::kRis, Part::kRis) = s_ii;
  s.s.Block(Part::kRis, Part::kTx) = s_it;
  s.s.Block(Part::kRx, Part::kRis) = z_ri / (2.0 * z0) * (Identity(m) - s_ii);
  s.s.Block(Part::kRx, Part::kTx) = z_rt / (2.0 * z0) - z_ri / (2.0 * z0) * s_it;
  return s;
}

ComplexMatrix ChannelGeneral(const ScatteringParams &s, const ComplexMatrix &gamma_t,
                             const ComplexMatrix &theta, const ComplexMatrix &gamma_r,
                             const NumericOptions &opts)
{
  const auto &ports = s.s.Ports();
  const Index l = ports.Total();
  if (gamma_t.rows() != ports.tx || gamma_t.cols() != ports.tx || theta.rows() != ports.ris ||
      theta.cols() != ports.ris || gamma_r.rows() != ports.rx || gamma_r.cols() != ports.rx)
  {
    throw DimensionMismatch("termination matrices do not match the port partition");
  }
  ComplexMatrix gamma = ComplexMatrix::Zero(l, l);
  gamma.block(ports.Offset(Part::kTx), ports.Offset(Part::kTx), ports.tx, ports.tx) = gamma_t;
  gamma.block(ports.Offset(Part::kRis), ports.Offset(Part::kRis), ports.ris, ports.ris) = theta;
  gamma.block(ports.Offset(Part::kRx), ports.Offset(Part::kRx), ports.rx, ports.rx) = gamma_r;

  const ComplexMatrix &s_full = s.s.Full();
  const CheckedLU lu(Identity(l) - gamma * s_full, opts, "I - Gamma S");
  const PartitionedMatrix t(ports, lu.SolveLeft(s_full));
  const ComplexMatrix t_tt = t.Block(Part::kTx, Part::kTx);
  const ComplexMatrix t_rt = t.Block(Part::kRx, Part::kTx);

  const CheckedLU lu_tx(Identity(ports.tx) + gamma_t * t_tt + t_tt, opts,
                        "I + Gamma_T T_TT + T_TT");
  const CheckedLU lu_rx(gamma_r + Identity(ports.rx), opts, "Gamma_R + I");
  return lu_rx.Solve(lu_tx.SolveLeft(t_rt));
}

ComplexMatrix ChannelScattering(const ScatteringParams &s, const ComplexMatrix &theta,
                                const NumericOptions &opts)
{
  const Index m = s.s.Ports().ris;
  if (theta.rows() != m || theta.cols() != m)
  {
    throw DimensionMismatch("Theta must be M x M");
  }
  const ComplexMatrix s_ii = s.s.Block(Part::kRis, Part::kRis);
  const CheckedLU lu(Identity(m) - theta * s_ii, opts, "I - Theta S_II");
  return s.s.Block(Part::kRx, Part::kTx) +
         s.s.Block(Part::kRx, Part::kRis) * lu.Solve(theta * s.s.Block(Part::kRis, Part::kTx));
}

ComplexMatrix ChannelImpedance(const ImpedanceParams &z, const ComplexMatrix &z_i,
                               const NumericOptions &opts)
{
  z.Validate(opts);
  const Index m = z.z.Ports().ris;
  if (z_i.rows() != m || z_i.cols() != m)
  {
    throw DimensionMismatch("Z_I must be M x M");
  }
  const CheckedLU lu(z.z.Block(Part::kRis, Part::kRis) + z_i, opts, "Z_II + Z_I");
  return (z.z.Block(Part::kRx, Part::kTx) -
          z.z.Block(Part::kRx, Part::kRis) * lu.Solve(z.z.Block(Part::kRis, Part::kTx))) /
         (2.0 * z.z0);
}

namespace
{

Complex GainAmplitude(const ChannelTerms &terms, const ComplexMatrix &z_i,
                      const NumericOptions &opts)
{
  if (z_i.rows() != terms.Elements() || z_i.cols() != terms.Elements())
  {
    throw DimensionMismatch("Z_I must be M x M");
  }
  const CheckedLU lu(terms.z_ii + z_i, opts, "Z_II + Z_I");
  return terms.z_rt - (terms.z_ri * lu.Solve(terms.z_it))(0, 0);
}

}  // namespace

Complex ChannelImpedance(const ChannelTerms &terms, const ComplexMatrix &z_i,
                         const NumericOptions &opts)
{
  return GainAmplitude(terms, z_i, opts) / (2.0 * terms.z0);
}

double ChannelGain(const ChannelTerms &terms, const ComplexMatrix &z_i, const NumericOptions &opts)
{
  return std::norm(GainAmplitude(terms, z_i, opts));
}

double ChannelGain(const ChannelTerms &terms, const TunableImpedance &z_i,
                   const NumericOptions &opts)
{
  return ChannelGain(terms, z_i.Dense(), opts);
}

}  // namespace bdris
