// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_QUADRATURE_HPP
#define BDRIS_QUADRATURE_HPP

#include <vector>

namespace bdris
{

struct QuadratureRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule GaussLegendre(int n);

// Composite rule on [lo, hi]: `panels` equal sub-intervals, each with the n-point
// Gauss-Legendre rule.
QuadratureRule CompositeGaussLegendre(double lo, double hi, int panels, int n);

}  // namespace bdris

#endif  // BDRIS_QUADRATURE_HPP
