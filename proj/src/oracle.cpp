// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include "bdris/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include "bdris/errors.hpp"

namespace bdris
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Eigenvalues of Theta closer than this to +1 are skipped (impedance diverges).
constexpr double kIdentityDistance = 1e-6;

int AnglesPerGroup(int group_size)
{
  return group_size == 1 ? 1 : 3;
}

// Z0 cot(theta / 2): the reactance whose reflection coefficient is exp(j theta).
double ReactanceOfPhase(double theta, double z0)
{
  if (std::abs(std::polar(1.0, theta) - 1.0) < kIdentityDistance)
  {
    throw ThetaNearIdentity("reflection eigenvalue within 1e-6 of +1");
  }
  return z0 / std::tan(0.5 * theta);
}

void RequireSupported(const RisArchitecture &arch)
{
  if (arch.Elements() > 4)
  {
    throw CostGuard("oracle search is limited to M <= 4 (got M = " +
                    std::to_string(arch.Elements()) + ")");
  }
  if (arch.GroupSize() > 2)
  {
    throw InvalidArchitecture("oracle search supports group sizes 1 and 2 only");
  }
}

// Maps search coordinates to oracle angles. Eigen-angle axes are optionally warped
// around the mean element resonance; rotation axes are used as is.
class AxisMap
{
public:
  AxisMap(const ChannelTerms &terms, const RisArchitecture &arch, bool warp)
      : z0_(terms.z0), per_group_(AnglesPerGroup(arch.GroupSize())), warp_(warp)
  {
    const Complex mean = terms.z_ii.diagonal().mean();
    center_ = -mean.imag();
    scale_ = mean.real() > 0.0 ? mean.real() : terms.z0;
  }

  bool IsRotation(size_t d) const { return per_group_ == 3 && d % 3 == 2; }

  // Period of search coordinate d.
  double Period(size_t d) const
  {
    return IsRotation(d) || warp_ ? std::numbers::pi : kTwoPi;
  }

  // Lower end of the search interval of coordinate d.
  double Start(size_t d) const
  {
    return warp_ && !IsRotation(d) ? -0.5 * std::numbers::pi : 0.0;
  }

  std::vector<double> ToAngles(const std::vector<double> &u) const
  {
    std::vector<double> angles = u;
    if (!warp_)
    {
      return angles;
    }
    for (size_t d = 0; d < u.size(); d++)
    {
      if (!IsRotation(d))
      {
        const double x = center_ + scale_ * std::tan(u[d]);
        angles[d] = 2.0 * std::atan2(z0_, x);
      }
    }
    return angles;
  }

private:
  double z0_;
  int per_group_;
  bool warp_;
  double center_ = 0.0;
  double scale_ = 1.0;
};

class Objective
{
public:
  Objective(const ChannelTerms &terms, const RisArchitecture &arch, const AxisMap &axes)
      : terms_(terms), arch_(arch), axes_(axes)
  {
  }

  // Gain at the search coordinates, or -1 where the tuning does not exist.
  double operator()(const std::vector<double> &u)
  {
    evaluations_++;
    try
    {
      return ChannelGain(terms_, TuningFromAngles(arch_, axes_.ToAngles(u), terms_.z0));
    }
    catch (const ThetaNearIdentity &)
    {
      return -1.0;
    }
    catch (const SingularMatrix &)
    {
      return -1.0;
    }
  }

  long Evaluations() const { return evaluations_; }

private:
  const ChannelTerms &terms_;
  const RisArchitecture &arch_;
  const AxisMap &axes_;
  long evaluations_ = 0;
};

struct Point
{
  double gain;
  std::vector<double> angles;
};

// Calls fn(angles) for every point of the tensor grid with `points` per axis spanning
// center[d] +/- half[d].
template <typename Fn>
void ForEachGridPoint(const std::vector<double> &lo, const std::vector<double> &step, int points,
                      Fn &&fn)
{
  const size_t dims = lo.size();
  std::vector<int> idx(dims, 0);
  std::vector<double> angles(dims);
  while (true)
  {
    for (size_t d = 0; d < dims; d++)
    {
      angles[d] = lo[d] + step[d] * idx[d];
    }
    fn(angles);
    size_t d = 0;
    for (; d < dims; d++)
    {
      if (++idx[d] < points)
      {
        break;
      }
      idx[d] = 0;
    }
    if (d == dims)
    {
      return;
    }
  }
}

bool Separated(const std::vector<double> &a, const std::vector<double> &b,
               const std::vector<double> &min_distance, const std::vector<double> &period)
{
  for (size_t d = 0; d < a.size(); d++)
  {
    double diff = std::abs(a[d] - b[d]);
    diff = std::min(diff, period[d] - diff);
    if (diff > min_distance[d])
    {
      return true;
    }
  }
  return false;
}

}  // namespace

TunableImpedance TuningFromAngles(const RisArchitecture &arch, const std::vector<double> &angles,
                                  double z0)
{
  RequireSupported(arch);
  const int size = arch.GroupSize();
  if (static_cast<int>(angles.size()) != arch.Groups() * AnglesPerGroup(size))
  {
    throw DimensionMismatch("wrong number of oracle angles");
  }
  TunableImpedance z(arch);
  for (int g = 0; g < arch.Groups(); g++)
  {
    auto packed = z.Packed(g);
    if (size == 1)
    {
      packed[0] = ReactanceOfPhase(angles[g], z0);
      continue;
    }
    const double x1 = ReactanceOfPhase(angles[3 * g], z0);
    const double x2 = ReactanceOfPhase(angles[3 * g + 1], z0);
    const double cs = std::cos(angles[3 * g + 2]);
    const double sn = std::sin(angles[3 * g + 2]);
    // R diag(x1, x2) R^T with R = [[cs, -sn], [sn, cs]].
    packed[PackedIndex(0, 0)] = cs * cs * x1 + sn * sn * x2;
    packed[PackedIndex(1, 0)] = sn * cs * (x1 - x2);
    packed[PackedIndex(1, 1)] = sn * sn * x1 + cs * cs * x2;
  }
  return z;
}

ComplexMatrix ThetaFromAngles(const RisArchitecture &arch, const std::vector<double> &angles)
{
  RequireSupported(arch);
  const int size = arch.GroupSize();
  if (static_cast<int>(angles.size()) != arch.Groups() * AnglesPerGroup(size))
  {
    throw DimensionMismatch("wrong number of oracle angles");
  }
  std::vector<ComplexMatrix> blocks;
  for (int g = 0; g < arch.Groups(); g++)
  {
    if (size == 1)
    {
      blocks.push_back(ComplexMatrix::Constant(1, 1, std::polar(1.0, angles[g])));
      continue;
    }
    Eigen::Matrix2d r;
    const double psi = angles[3 * g + 2];
    r << std::cos(psi), -std::sin(psi), std::sin(psi), std::cos(psi);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = std::polar(1.0, angles[3 * g]);
    d(1, 1) = std::polar(1.0, angles[3 * g + 1]);
    const ComplexMatrix rc = r.cast<Complex>();
    blocks.push_back(rc * d * rc.transpose());
  }
  return AssembleBlockDiagonal(blocks);
}

OracleResult OracleSearch(const ChannelTerms &terms, const RisArchitecture &arch,
                          const OracleOptions &options)
{
  RequireSupported(arch);
  terms.Validate();
  if (terms.Elements() != arch.Elements())
  {
    throw DimensionMismatch("architecture and channel terms disagree on M");
  }
  if (options.resolution < 2 || options.candidates < 1 || options.zoom_levels < 0 ||
      options.zoom_points < 5)
  {
    throw Error("invalid oracle options");
  }
  const size_t dims = static_cast<size_t>(arch.Groups() * AnglesPerGroup(arch.GroupSize()));
  const AxisMap axes(terms, arch, options.resonance_warp);
  std::vector<double> period(dims);
  for (size_t d = 0; d < dims; d++)
  {
    period[d] = axes.Period(d);
  }
  const double grid_points = std::pow(static_cast<double>(options.resolution), static_cast<double>(dims));
  if (grid_points > static_cast<double>(options.max_grid_points))
  {
    throw CostGuard("oracle grid of " + std::to_string(static_cast<long>(grid_points)) +
                    " points exceeds the limit");
  }

  Objective objective(terms, arch, axes);

  // Uniform grid, offset by half a cell so that Theta = +1 is never sampled.
  std::vector<double> cell(dims), lo(dims);
  for (size_t d = 0; d < dims; d++)
  {
    cell[d] = period[d] / options.resolution;
    lo[d] = axes.Start(d) + 0.5 * cell[d];
  }
  const size_t keep = static_cast<size_t>(options.candidates) * 32;
  std::vector<Point> top;
  auto by_gain = [](const Point &x, const Point &y) { return x.gain > y.gain; };
  ForEachGridPoint(lo, cell, options.resolution, [&](const std::vector<double> &angles) {
    const double gain = objective(angles);
    if (top.size() < keep || gain > top.back().gain)
    {
      top.push_back({gain, angles});
      std::sort(top.begin(), top.end(), by_gain);
      if (top.size() > keep)
      {
        top.pop_back();
      }
    }
  });

  // Well-separated seeds, best first.
  std::vector<double> separation(dims);
  for (size_t d = 0; d < dims; d++)
  {
    separation[d] = 2.0 * cell[d];
  }
  std::vector<Point> seeds;
  for (const auto &p : top)
  {
    if (p.gain < 0.0 || static_cast<int>(seeds.size()) >= options.candidates)
    {
      break;
    }
    const bool distinct = std::all_of(seeds.begin(), seeds.end(), [&](const Point &s) {
      return Separated(s.angles, p.angles, separation, period);
    });
    if (distinct)
    {
      seeds.push_back(p);
    }
  }
  if (seeds.empty())
  {
    throw Error("oracle grid found no admissible tuning");
  }

  const double zoom_cost = std::pow(static_cast<double>(options.zoom_points), static_cast<double>(dims));
  const int zoom_points = zoom_cost > 50000.0 ? 5 : options.zoom_points;

  Point best{-1.0, {}};
  for (Point incumbent : seeds)
  {
    std::vector<double> half(dims);
    for (size_t d = 0; d < dims; d++)
    {
      half[d] = cell[d];
    }
    for (int level = 0; level < options.zoom_levels; level++)
    {
      std::vector<double> zlo(dims), zstep(dims);
      for (size_t d = 0; d < dims; d++)
      {
        zlo[d] = incumbent.angles[d] - half[d];
        zstep[d] = 2.0 * half[d] / (zoom_points - 1);
      }
      Point level_best = incumbent;
      ForEachGridPoint(zlo, zstep, zoom_points, [&](const std::vector<double> &angles) {
        const double gain = objective(angles);
        if (gain > level_best.gain)
        {
          level_best = {gain, angles};
        }
      });
      incumbent = level_best;
      for (auto &h : half)
      {
        h *= 0.5;
      }
    }
    // Golden-section pass along each angle within the last zoom box.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (size_t d = 0; d < dims; d++)
    {
      const double width = 4.0 * std::max(half[d], 1e-15);
      double a = incumbent.angles[d] - width;
      double b = incumbent.angles[d] + width;
      std::vector<double> probe = incumbent.angles;
      auto at = [&](double v) {
        probe[d] = v;
        return objective(probe);
      };
      double x1 = b - inv_phi * (b - a);
      double x2 = a + inv_phi * (b - a);
      double f1 = at(x1);
      double f2 = at(x2);
      for (int it = 0; it < 60; it++)
      {
        if (f1 >= f2)
        {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - inv_phi * (b - a);
          f1 = at(x1);
        }
        else
        {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + inv_phi * (b - a);
          f2 = at(x2);
        }
      }
      const double x = f1 >= f2 ? x1 : x2;
      const double f = std::max(f1, f2);
      if (f > incumbent.gain)
      {
        incumbent.angles[d] = x;
        incumbent.gain = f;
      }
    }
    if (incumbent.gain > best.gain)
    {
      best = incumbent;
    }
  }

  // Report angles in their canonical ranges.
  best.angles = axes.ToAngles(best.angles);
  for (size_t d = 0; d < dims; d++)
  {
    const double range = axes.IsRotation(d) ? std::numbers::pi : kTwoPi;
    best.angles[d] = std::fmod(std::fmod(best.angles[d], range) + range, range);
  }
  OracleResult result(TuningFromAngles(arch, best.angles, terms.z0));
  result.gain = ChannelGain(terms, result.z_i);
  result.angles = best.angles;
  result.evaluations = objective.Evaluations();
  return result;
}

}  // namespace bdris
