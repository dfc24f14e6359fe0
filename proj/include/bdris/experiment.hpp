// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_EXPERIMENT_HPP
#define BDRIS_EXPERIMENT_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>
#include "bdris/optimizer.hpp"
#include "bdris/scenario_io.hpp"

namespace bdris
{

// Group size of the group-connected architecture in sweeps.
inline constexpr int kSweepGroupSize = 4;

enum class CouplingMode
{
  kWithMc,
  kWithoutMc,
};

std::string ToString(CouplingMode mode);

// "SC" (G = M), "GC" (M̄ = group_size) or "FC" (G = 1); nullopt when M̄ does not divide
// M. Throws ConfigError on an unknown label.
std::optional<RisArchitecture> ArchitectureFor(const std::string &label, int elements,
                                               int group_size = kSweepGroupSize);

struct SweepSpec
{
  std::vector<int> elements = {4, 9, 16, 25, 36};
  std::vector<double> spacings_over_lambda = {0.5, 0.25, 0.125};
  std::vector<std::string> architectures = {"SC", "GC", "FC"};
  std::vector<CouplingMode> modes = {CouplingMode::kWithMc, CouplingMode::kWithoutMc};
  int group_size = kSweepGroupSize;
};

struct RunRecord
{
  std::string scenario_hash;
  int elements = 0;
  double d_over_lambda = 0.0;
  std::string arch;
  CouplingMode mode = CouplingMode::kWithMc;
  double gain = 0.0;
  int iterations = 0;
  Termination termination = Termination::kConverged;
  double wall_seconds = 0.0;
};

//
// One optimization. With coupling the tuning is optimized for the full Z_II; without,
// it is optimized for the decoupled terms and then evaluated on the full (physical)
// Z_II, so both modes report the gain of the real channel.
//
struct SingleRun
{
  RunRecord record;
  OptimizationResult result;
};

SingleRun RunOne(const ChannelTerms &terms, const std::string &scenario_hash,
                 const RisArchitecture &arch, double d_over_lambda, CouplingMode mode,
                 const OptimizerConfig &config);

struct ConvergenceRun
{
  double d_over_lambda;
  std::string arch;
  OptimizationResult result;
};

// One optimization with coupling per (d, architecture) for base.elements, ordered by d
// descending then SC, GC, FC. Pairs whose group size does not divide M are skipped.
std::vector<ConvergenceRun> SweepConvergence(const ScenarioConfig &base, const SweepSpec &spec,
                                             const OptimizerConfig &config,
                                             const CacheOptions &cache, unsigned workers = 0);

// All (M, d, arch, mode) combinations, ordered by M, d descending, SC/GC/FC, with/without.
std::vector<RunRecord> SweepGain(const ScenarioConfig &base, const SweepSpec &spec,
                                 const OptimizerConfig &config, const CacheOptions &cache,
                                 unsigned workers = 0);

// Shortest round-trip decimal form, locale independent.
std::string FormatNumber(double value);

// iteration,c_linearized,gain_exact
void WriteTraceCsv(std::ostream &out, const std::vector<TraceRow> &trace);
// d_over_lambda,arch,iteration,c_linearized,gain_exact
void WriteConvergenceCsv(std::ostream &out, const std::vector<ConvergenceRun> &runs);
// M,d_over_lambda,arch,mode,gain
void WriteGainCsv(std::ostream &out, const std::vector<RunRecord> &records);

nlohmann::json ToJson(const RunRecord &record);
nlohmann::json ConvergenceJson(const std::vector<ConvergenceRun> &runs);
nlohmann::json GainJson(const std::vector<RunRecord> &records);

}  // namespace bdris

#endif  // BDRIS_EXPERIMENT_HPP
