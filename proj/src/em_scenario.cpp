// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include "bdris/em_scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include "bdris/errors.hpp"
#include "bdris/parallel.hpp"
#include "bdris/quadrature.hpp"

namespace bdris
{

void Dipole::Validate() const
{
  if (!(length > 0.0) || !(radius > 0.0) || !(radius < length) || !center.allFinite())
  {
    throw InvalidGeometry("dipole requires 0 < radius < length and a finite center");
  }
}

DerivedConstants DerivedConstants::FromFrequency(double frequency_hz)
{
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz))
  {
    throw InvalidGeometry("frequency must be positive");
  }
  const double wavelength = kSpeedOfLight / frequency_hz;
  return {wavelength, 2.0 * std::numbers::pi / wavelength, kFreeSpaceImpedance};
}

namespace
{

// Quadrature nodes along one wire with the sinusoidal current weight folded into the
// weights.
struct WireRule
{
  std::vector<double> z;
  std::vector<double> w;
};

WireRule MakeWireRule(const Dipole &d, double wavenumber, int panels_per_half, int order)
{
  const double half = 0.5 * d.length;
  const double zc = d.center.z();
  QuadratureRule lower = CompositeGaussLegendre(zc - half, zc, panels_per_half, order);
  QuadratureRule upper = CompositeGaussLegendre(zc, zc + half, panels_per_half, order);
  const double norm = std::sin(wavenumber * half);
  WireRule rule;
  rule.z.reserve(lower.nodes.size() * 2);
  rule.w.reserve(lower.nodes.size() * 2);
  for (const QuadratureRule *part : {&lower, &upper})
  {
    for (size_t i = 0; i < part->nodes.size(); i++)
    {
      const double zp = part->nodes[i];
      rule.z.push_back(zp);
      rule.w.push_back(part->weights[i] * std::sin(wavenumber * (half - std::abs(zp - zc))) / norm);
    }
  }
  return rule;
}

Complex IntegrateKernel(const WireRule &ra, const WireRule &rb, double lateral,
                        const DerivedConstants &k)
{
  const double kappa = k.wavenumber;
  const double kappa2 = kappa * kappa;
  const double lateral2 = lateral * lateral;
  const Complex prefactor = kJ * k.eta0 / (4.0 * std::numbers::pi * kappa);
  Complex sum{0.0, 0.0};
  for (size_t i = 0; i < ra.z.size(); i++)
  {
    Complex row{0.0, 0.0};
    for (size_t j = 0; j < rb.z.size(); j++)
    {
      const double dz = ra.z[i] - rb.z[j];
      const double dz2 = dz * dz;
      const double d2 = lateral2 + dz2;
      const double d = std::sqrt(d2);
      const double inv_d = 1.0 / d;
      const Complex bracket = (dz2 / d2) * Complex(3.0 / d2 - kappa2, 3.0 * kappa * inv_d) -
                              Complex(inv_d, kappa) * inv_d + kappa2;
      const Complex phase = std::polar(inv_d, -kappa * d);
      row += rb.w[j] * bracket * phase;
    }
    sum += ra.w[i] * row;
  }
  return prefactor * sum;
}

}  // namespace

Complex MutualImpedance(const Dipole &a, const Dipole &b, const DerivedConstants &constants,
                        const QuadratureOptions &quadrature)
{
  a.Validate();
  b.Validate();
  if (quadrature.order < 1)
  {
    throw Error("quadrature order must be positive");
  }
  const bool self = a == b;
  const double lateral = self ? a.radius
                              : std::hypot(a.center.x() - b.center.x(), a.center.y() - b.center.y());
  const double axial_gap =
      std::max(0.0, std::abs(a.center.z() - b.center.z()) - 0.5 * (a.length + b.length));
  if (!self && lateral < a.radius + b.radius && axial_gap <= 0.0)
  {
    throw InvalidGeometry("distinct dipoles overlap");
  }

  const double closest = std::hypot(lateral, axial_gap);
  const double half = 0.5 * std::max(a.length, b.length);
  const int panels = std::clamp(static_cast<int>(std::ceil(half / (2.0 * closest))), 1,
                                quadrature.max_panels_per_half);

  auto evaluate = [&](int order) {
    const WireRule ra = MakeWireRule(a, constants.wavenumber, panels, order);
    const WireRule rb = MakeWireRule(b, constants.wavenumber, panels, order);
    return IntegrateKernel(ra, rb, lateral, constants);
  };
  const Complex coarse = evaluate(quadrature.order);
  const Complex fine = evaluate(2 * quadrature.order);
  if (std::abs(fine - coarse) > quadrature.relative_tolerance * std::abs(fine))
  {
    throw QuadratureNotConverged("mutual impedance changed by " +
                                 std::to_string(std::abs(fine - coarse) / std::abs(fine)) +
                                 " (relative) when doubling the quadrature order");
  }
  return fine;
}

GridLayout ClosestToSquare(int m)
{
  if (m < 1)
  {
    throw InvalidGeometry("element count must be positive");
  }
  int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(m))));
  while (m % rows != 0)
  {
    rows--;
  }
  return {rows, m / rows};
}

std::vector<Dipole> PlaceRisGrid(int m, double spacing, GridLayout layout, double length,
                                 double radius)
{
  if (layout.rows < 1 || layout.cols < 1 || layout.rows * layout.cols != m)
  {
    throw InvalidGeometry("grid layout " + std::to_string(layout.rows) + "x" +
                          std::to_string(layout.cols) + " does not hold " + std::to_string(m) +
                          " elements");
  }
  if (m > 1 && !(spacing > 2.0 * radius))
  {
    throw InvalidGeometry("element spacing must exceed the wire diameter");
  }
  std::vector<Dipole> dipoles;
  dipoles.reserve(m);
  for (int r = 0; r < layout.rows; r++)
  {
    for (int c = 0; c < layout.cols; c++)
    {
      Dipole d;
      d.center = {0.0, (c - 0.5 * (layout.cols - 1)) * spacing,
                  (r - 0.5 * (layout.rows - 1)) * spacing};
      d.length = length;
      d.radius = radius;
      d.Validate();
      dipoles.push_back(d);
    }
  }
  return dipoles;
}

void ScenarioConfig::Validate() const
{
  auto fail = [](const std::string &what) { throw ConfigError(what); };
  if (!(frequency_hz > 0.0))
  {
    fail("frequency must be positive");
  }
  if (elements < 1)
  {
    fail("m must be at least 1");
  }
  if (group_size < 1 || elements % group_size != 0)
  {
    fail("group_size must divide m");
  }
  if (!(spacing_over_lambda > 0.0))
  {
    fail("spacing_over_lambda must be positive");
  }
  const GridLayout layout = Layout();
  if (layout.rows < 1 || layout.cols < 1 || layout.rows * layout.cols != elements)
  {
    fail("grid rows x cols must equal m");
  }
  if (quadrature_order < 1)
  {
    fail("quadrature_order must be positive");
  }
  if (!(length_over_lambda > 0.0) || !(radius_over_lambda > 0.0) ||
      !(radius_over_lambda < length_over_lambda))
  {
    fail("dipole dimensions require 0 < radius < length");
  }
  if (!(z0 > 0.0))
  {
    fail("z0 must be positive");
  }
}

ChannelTerms BuildScenario(const ScenarioConfig &config, const QuadratureOptions &quadrature_defaults)
{
  config.Validate();
  const DerivedConstants k = DerivedConstants::FromFrequency(config.frequency_hz);
  const double lambda = k.wavelength;
  const double length = config.length_over_lambda * lambda;
  const double radius = config.radius_over_lambda * lambda;
  const std::vector<Dipole> ris =
      PlaceRisGrid(config.elements, config.spacing_over_lambda * lambda, config.Layout(), length, radius);

  Dipole tx;
  tx.center = config.tx_position;
  tx.length = config.txrx_length_over_lambda.value_or(config.length_over_lambda) * lambda;
  tx.radius = config.txrx_radius_over_lambda.value_or(config.radius_over_lambda) * lambda;
  Dipole rx = tx;
  rx.center = config.rx_position;

  QuadratureOptions quad = quadrature_defaults;
  quad.order = config.quadrature_order;

  const int m = config.elements;
  ChannelTerms terms;
  terms.z0 = config.z0;
  terms.z_rt = config.z_rt_override.value_or(Complex{0.0, 0.0});
  terms.z_ii = ComplexMatrix::Zero(m, m);
  terms.z_ri = ComplexRowVector::Zero(m);
  terms.z_it = ComplexVector::Zero(m);

  // Work items: upper triangle of Z_II, then one Rx and one Tx entry per element.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < m; i++)
  {
    for (int j = i; j < m; j++)
    {
      pairs.emplace_back(i, j);
    }
  }
  const size_t n_pairs = pairs.size();
  ParallelFor(n_pairs + 2 * static_cast<size_t>(m), [&](size_t task) {
    if (task < n_pairs)
    {
      const auto [i, j] = pairs[task];
      terms.z_ii(i, j) = MutualImpedance(ris[i], ris[j], k, quad);
    }
    else if (task < n_pairs + m)
    {
      const auto i = static_cast<int>(task - n_pairs);
      terms.z_ri(i) = MutualImpedance(rx, ris[i], k, quad);
    }
    else
    {
      const auto i = static_cast<int>(task - n_pairs - m);
      terms.z_it(i) = MutualImpedance(ris[i], tx, k, quad);
    }
  });
  for (int i = 0; i < m; i++)
  {
    for (int j = i + 1; j < m; j++)
    {
      terms.z_ii(j, i) = terms.z_ii(i, j);
    }
  }
  return terms;
}

ChannelTerms Decouple(const ChannelTerms &terms)
{
  ChannelTerms out = terms;
  out.z_ii = terms.z_ii.diagonal().asDiagonal();
  return out;
}

CouplingSummary SummarizeCoupling(const ChannelTerms &terms)
{
  CouplingSummary s;
  const Index m = terms.Elements();
  if (m == 0)
  {
    return s;
  }
  const Eigen::VectorXd r = terms.z_ii.diagonal().real();
  const Eigen::VectorXd x = terms.z_ii.diagonal().imag();
  s.min_self_resistance = r.minCoeff();
  s.max_self_resistance = r.maxCoeff();
  s.min_self_reactance = x.minCoeff();
  s.max_self_reactance = x.maxCoeff();
  for (Index i = 0; i < m; i++)
  {
    for (Index j = 0; j < m; j++)
    {
      if (i != j)
      {
        s.max_offdiag_abs = std::max(s.max_offdiag_abs, std::abs(terms.z_ii(i, j)));
      }
    }
  }
  return s;
}

}  // namespace bdris
