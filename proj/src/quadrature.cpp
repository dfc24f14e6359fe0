// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include "bdris/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace bdris
{

namespace
{

QuadratureRule ComputeGaussLegendre(int n)
{
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const auto un = static_cast<unsigned>(n);
  for (int i = 0; i < (n + 1) / 2; i++)
  {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; it++)
    {
      const double p = std::legendre(un, x);
      const double pm1 = std::legendre(un - 1, x);
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
      {
        break;
      }
    }
    const double p = std::legendre(un, x);
    const double pm1 = std::legendre(un - 1, x);
    dp = n * (x * p - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

QuadratureRule GaussLegendre(int n)
{
  if (n < 1)
  {
    throw std::invalid_argument("Gauss-Legendre order must be positive");
  }
  if (n == 1)
  {
    return {{0.0}, {2.0}};
  }
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end())
  {
    it = cache.emplace(n, ComputeGaussLegendre(n)).first;
  }
  return it->second;
}

QuadratureRule CompositeGaussLegendre(double lo, double hi, int panels, int n)
{
  const QuadratureRule base = GaussLegendre(n);
  QuadratureRule rule;
  rule.nodes.reserve(static_cast<size_t>(panels) * n);
  rule.weights.reserve(static_cast<size_t>(panels) * n);
  const double width = (hi - lo) / panels;
  for (int p = 0; p < panels; p++)
  {
    const double a = lo + p * width;
    const double half = 0.5 * width;
    for (int k = 0; k < n; k++)
    {
      rule.nodes.push_back(a + half * (base.nodes[k] + 1.0));
      rule.weights.push_back(half * base.weights[k]);
    }
  }
  return rule;
}

}  // namespace bdris
