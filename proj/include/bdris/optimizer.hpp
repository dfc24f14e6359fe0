// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_OPTIMIZER_HPP
#define BDRIS_OPTIMIZER_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>
#include "bdris/architecture.hpp"
#include "bdris/network.hpp"

namespace bdris
{

enum class StepControl
{
  // Constant increment modulus delta on every iteration.
  kFixed,
  // Start each iteration at the current modulus (at most delta); halve it until the
  // exact objective does not decrease, double it (up to delta) after an accepted step.
  kAdaptive,
};

enum class Termination
{
  kConverged,
  kMaxIterations,
  kSingular,
};

std::string ToString(StepControl s);
std::string ToString(Termination t);

struct OptimizerConfig
{
  double delta = 6e-4;  // ohm
  int max_iterations = 20000;
  double relative_tolerance = 1e-8;
  // Evaluates M̄ ||(Z_II + Z_I)^-1||_inf each iteration, counts iterations where delta
  // exceeds 1% of its reciprocal, and throws NonMonotoneBeyondSlack when the trace drops
  // by more than `monotone_slack` (relative).
  bool neumann_guard = false;
  StepControl step_control = StepControl::kAdaptive;
  double monotone_slack = 1e-6;
  // Adaptive mode: the run is converged once the modulus would fall below
  // delta * min_delta_ratio.
  double min_delta_ratio = 1e-9;
  NumericOptions numeric;

  // Throws ConfigError on out-of-range values.
  void Validate() const;
};

//
// First-order model of the objective around Z_I^l:
//   a = z_RT - z_RI A^-1 z_IT,  b = z_RI A^-1,  c = A^-1 z_IT,  A = Z_II + Z_I^l,
// and for each group g, e_g = c_g^T (x) b_g, so that b_g Omega_g c_g = e_g vec(Omega_g)
// with entry m * M̄ + n equal to c_{g,m} b_{g,n}.
//
struct Linearization
{
  Complex a;
  ComplexRowVector b;
  ComplexVector c;
  std::vector<ComplexRowVector> e;
  // ||A^-1||_inf, only filled when requested.
  std::optional<double> inverse_inf_norm;

  double Gain() const { return std::norm(a); }
};

Linearization ComputeLinearization(const ChannelTerms &terms, const TunableImpedance &z_i,
                                   bool with_inverse_norm = false,
                                   const NumericOptions &opts = {});

// [omega_g]_i = delta exp(j(arg a - arg [e_g P]_i)), with arg 0 = 0.
std::vector<ComplexVector> SolveIncrement(Complex a, const std::vector<ComplexRowVector> &e,
                                          const SymmetryMap &p, double delta);

// Z_I + j Im{blkdiag(unvec(P omega_g))}.
TunableImpedance ApplyUpdate(const TunableImpedance &z_i, const std::vector<ComplexVector> &omega,
                             const SymmetryMap &p);

// |a + sum_g (e_g P) j Im{omega_g}|^2: the linearized objective after the update.
double LinearizedGain(Complex a, const std::vector<ComplexRowVector> &e,
                      const std::vector<ComplexVector> &omega, const SymmetryMap &p);

struct TraceRow
{
  int iteration;
  // C^l. Row 0 holds the exact gain of the initial point.
  double c_linearized;
  // Exact objective of iterate l.
  double gain_exact;
};

struct OptimizationResult
{
  explicit OptimizationResult(TunableImpedance start) : z_i(std::move(start)) {}

  TunableImpedance z_i;  // best iterate seen
  double gain = 0.0;     // exact objective of z_i
  std::vector<TraceRow> trace;
  int iterations = 0;
  Termination termination = Termination::kConverged;
  int rejected_steps = 0;
  int guard_warnings = 0;
  double final_delta = 0.0;
};

//
// Iterative maximization of |z_RT - z_RI (Z_II + Z_I)^-1 z_IT|^2 over tunings with the
// given architecture. Starts from `initial` if given, else from InitNoMc. Each iteration
// linearizes the inverse around the current tuning, picks the increment entries of
// modulus delta that align every first-order term with a, and adds its imaginary part.
// Stops when |C^l - C^{l-1}| <= tol C^{l-1} or after max_iterations.
//
// Called with (l, Z_I^l) for the initial point and every accepted iterate.
using IterateObserver = std::function<void(int, const TunableImpedance &)>;

OptimizationResult Optimize(const ChannelTerms &terms, const RisArchitecture &arch,
                            const OptimizerConfig &config = {},
                            const std::optional<TunableImpedance> &initial = std::nullopt,
                            const IterateObserver &observer = {});

nlohmann::json ToJson(const OptimizationResult &result);

}  // namespace bdris

#endif  // BDRIS_OPTIMIZER_HPP
