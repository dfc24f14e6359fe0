// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include "bdris/optimizer.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include "bdris/errors.hpp"

namespace bdris
{

std::string ToString(StepControl s)
{
  return s == StepControl::kFixed ? "fixed" : "adaptive";
}

std::string ToString(Termination t)
{
  switch (t)
  {
    case Termination::kConverged:
      return "converged";
    case Termination::kMaxIterations:
      return "max_iter";
    case Termination::kSingular:
      return "singular";
  }
  return "unknown";
}

void OptimizerConfig::Validate() const
{
  if (!(delta > 0.0) || !std::isfinite(delta))
  {
    throw ConfigError("delta must be positive");
  }
  if (!(relative_tolerance > 0.0))
  {
    throw ConfigError("relative tolerance must be positive");
  }
  if (max_iterations < 1)
  {
    throw ConfigError("max iterations must be at least 1");
  }
  if (!(monotone_slack >= 0.0))
  {
    throw ConfigError("monotone slack must be non-negative");
  }
  if (!(min_delta_ratio > 0.0 && min_delta_ratio < 1.0))
  {
    throw ConfigError("min_delta_ratio must lie in (0, 1)");
  }
}

Linearization ComputeLinearization(const ChannelTerms &terms, const TunableImpedance &z_i,
                                   bool with_inverse_norm, const NumericOptions &opts)
{
  const auto &arch = z_i.Architecture();
  if (terms.Elements() != arch.Elements())
  {
    throw DimensionMismatch("architecture and channel terms disagree on M");
  }
  const CheckedLU lu(terms.z_ii + z_i.Dense(), opts, "Z_II + Z_I");
  Linearization lin;
  lin.c = lu.Solve(terms.z_it);
  lin.b = lu.SolveLeft(terms.z_ri);
  lin.a = terms.z_rt - (terms.z_ri * lin.c)(0, 0);
  const int size = arch.GroupSize();
  lin.e.reserve(arch.Groups());
  for (int g = 0; g < arch.Groups(); g++)
  {
    ComplexRowVector e(size * size);
    for (int m = 0; m < size; m++)
    {
      for (int n = 0; n < size; n++)
      {
        e(m * size + n) = lin.c(g * size + m) * lin.b(g * size + n);
      }
    }
    lin.e.push_back(std::move(e));
  }
  if (with_inverse_norm)
  {
    lin.inverse_inf_norm = InfNorm(lu.Inverse());
  }
  return lin;
}

std::vector<ComplexVector> SolveIncrement(Complex a, const std::vector<ComplexRowVector> &e,
                                          const SymmetryMap &p, double delta)
{
  // Below this magnitude the phase of a carries no information.
  constexpr double kZeroAnchor = 1e-300;
  const double anchor = std::abs(a) < kZeroAnchor ? 0.0 : std::arg(a);
  std::vector<ComplexVector> omega;
  omega.reserve(e.size());
  for (const auto &eg : e)
  {
    const ComplexRowVector ep = p.RightMultiply(eg);
    ComplexVector w(ep.size());
    for (Index i = 0; i < ep.size(); i++)
    {
      const double phase = ep(i) == Complex(0.0, 0.0) ? 0.0 : std::arg(ep(i));
      w(i) = std::polar(delta, anchor - phase);
    }
    omega.push_back(std::move(w));
  }
  return omega;
}

TunableImpedance ApplyUpdate(const TunableImpedance &z_i, const std::vector<ComplexVector> &omega,
                             const SymmetryMap &p)
{
  const auto &arch = z_i.Architecture();
  if (static_cast<int>(omega.size()) != arch.Groups() || p.GroupSize() != arch.GroupSize())
  {
    throw DimensionMismatch("increment does not match the architecture");
  }
  TunableImpedance next = z_i;
  for (int g = 0; g < arch.Groups(); g++)
  {
    if (omega[g].size() != p.PackedSize())
    {
      throw DimensionMismatch("increment block has the wrong number of entries");
    }
    // Packed entry k is the value of every Omega_g entry that P maps to column k.
    auto packed = next.Packed(g);
    for (Index k = 0; k < omega[g].size(); k++)
    {
      packed[k] += omega[g](k).imag();
    }
  }
  return next;
}

double LinearizedGain(Complex a, const std::vector<ComplexRowVector> &e,
                      const std::vector<ComplexVector> &omega, const SymmetryMap &p)
{
  if (e.size() != omega.size())
  {
    throw DimensionMismatch("e and omega disagree on the number of groups");
  }
  Complex sum = a;
  for (size_t g = 0; g < e.size(); g++)
  {
    const ComplexRowVector ep = p.RightMultiply(e[g]);
    for (Index i = 0; i < ep.size(); i++)
    {
      sum += ep(i) * Complex(0.0, omega[g](i).imag());
    }
  }
  return std::norm(sum);
}

namespace
{

std::vector<ComplexVector> Scaled(const std::vector<ComplexVector> &unit, double delta)
{
  std::vector<ComplexVector> out = unit;
  for (auto &w : out)
  {
    w *= delta;
  }
  return out;
}

}  // namespace

OptimizationResult Optimize(const ChannelTerms &terms, const RisArchitecture &arch,
                            const OptimizerConfig &config,
                            const std::optional<TunableImpedance> &initial,
                            const IterateObserver &observer)
{
  config.Validate();
  terms.Validate(config.numeric);
  if (terms.Elements() != arch.Elements())
  {
    throw DimensionMismatch("architecture and channel terms disagree on M");
  }
  if (initial && !(initial->Architecture() == arch))
  {
    throw InvalidArchitecture("initial tuning has a different architecture");
  }
  const auto p = SymmetryMap::Get(arch.GroupSize());
  const bool guard = config.neumann_guard;
  const bool adaptive = config.step_control == StepControl::kAdaptive;
  const double min_delta = config.delta * config.min_delta_ratio;
  // Accepting only steps whose exact gain reaches the prediction within half the slack
  // keeps both the linearized and exact traces monotone within the slack.
  const double accept_slack = 0.5 * config.monotone_slack;

  OptimizationResult result(initial.value_or(InitNoMc(terms, arch)));
  TunableImpedance z = result.z_i;
  if (observer)
  {
    observer(0, z);
  }
  Linearization lin;
  try
  {
    lin = ComputeLinearization(terms, z, guard, config.numeric);
  }
  catch (const SingularMatrix &)
  {
    result.termination = Termination::kSingular;
    result.gain = 0.0;
    return result;
  }
  result.gain = lin.Gain();
  result.trace.push_back({0, lin.Gain(), lin.Gain()});
  double previous_c = lin.Gain();
  double step = config.delta;
  result.termination = Termination::kMaxIterations;

  for (int l = 1; l <= config.max_iterations; l++)
  {
    if (guard && lin.inverse_inf_norm &&
        step > 0.01 / (arch.GroupSize() * *lin.inverse_inf_norm))
    {
      result.guard_warnings++;
    }
    const auto unit = SolveIncrement(lin.a, lin.e, *p, 1.0);
    double c_value = 0.0;
    TunableImpedance next = z;
    Linearization next_lin;
    bool stalled = false;
    while (true)
    {
      const auto omega = Scaled(unit, step);
      c_value = LinearizedGain(lin.a, lin.e, omega, *p);
      next = ApplyUpdate(z, omega, *p);
      bool ok = true;
      try
      {
        next_lin = ComputeLinearization(terms, next, guard, config.numeric);
      }
      catch (const SingularMatrix &)
      {
        if (!adaptive)
        {
          result.termination = Termination::kSingular;
          result.iterations = l - 1;
          result.final_delta = step;
          return result;
        }
        ok = false;
      }
      if (!adaptive || (ok && next_lin.Gain() >= c_value * (1.0 - accept_slack)))
      {
        break;
      }
      result.rejected_steps++;
      step *= 0.5;
      if (step < min_delta)
      {
        stalled = true;
        break;
      }
    }
    if (stalled)
    {
      // No modulus above the floor improves the objective: a stationary point.
      result.termination = Termination::kConverged;
      result.iterations = l - 1;
      break;
    }

    z = std::move(next);
    lin = std::move(next_lin);
    if (observer)
    {
      observer(l, z);
    }
    result.trace.push_back({l, c_value, lin.Gain()});
    result.iterations = l;
    if (lin.Gain() > result.gain)
    {
      result.gain = lin.Gain();
      result.z_i = z;
    }
    if (guard && c_value < previous_c * (1.0 - config.monotone_slack))
    {
      std::ostringstream what;
      what << std::setprecision(10) << "linearized gain dropped from " << previous_c << " to "
           << c_value << " at iteration " << l << "; delta is too large";
      throw NonMonotoneBeyondSlack(what.str(), l);
    }
    if (std::abs(c_value - previous_c) <= config.relative_tolerance * previous_c)
    {
      result.termination = Termination::kConverged;
      break;
    }
    previous_c = c_value;
    if (adaptive)
    {
      step = std::min(config.delta, 2.0 * step);
    }
  }
  result.final_delta = step;
  result.gain = ChannelGain(terms, result.z_i, config.numeric);
  return result;
}

nlohmann::json ToJson(const OptimizationResult &result)
{
  auto trace = nlohmann::json::array();
  for (const auto &row : result.trace)
  {
    trace.push_back({{"iteration", row.iteration},
                     {"c_linearized", row.c_linearized},
                     {"gain_exact", row.gain_exact}});
  }
  return {{"z_i", ToJson(result.z_i)},
          {"gain", result.gain},
          {"iterations", result.iterations},
          {"termination", ToString(result.termination)},
          {"rejected_steps", result.rejected_steps},
          {"guard_warnings", result.guard_warnings},
          {"final_delta", result.final_delta},
          {"trace", trace}};
}

}  // namespace bdris
