// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include "bdris/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include "bdris/errors.hpp"
#include "bdris/parallel.hpp"

namespace bdris
{

std::string ToString(CouplingMode mode)
{
  return mode == CouplingMode::kWithMc ? "with_mc" : "without_mc";
}

std::optional<RisArchitecture> ArchitectureFor(const std::string &label, int elements, int group_size)
{
  if (label == "SC")
  {
    return RisArchitecture::Make(elements, elements);
  }
  if (label == "FC")
  {
    return RisArchitecture::Make(elements, 1);
  }
  if (label == "GC")
  {
    if (group_size < 1 || elements % group_size != 0)
    {
      return std::nullopt;
    }
    return RisArchitecture::Make(elements, elements / group_size);
  }
  throw ConfigError("unknown architecture label '" + label + "' (expected SC, GC or FC)");
}

SingleRun RunOne(const ChannelTerms &terms, const std::string &scenario_hash,
                 const RisArchitecture &arch, double d_over_lambda, CouplingMode mode,
                 const OptimizerConfig &config)
{
  const auto start = std::chrono::steady_clock::now();
  SingleRun run{{}, mode == CouplingMode::kWithMc ? Optimize(terms, arch, config)
                                                  : Optimize(Decouple(terms), arch, config)};
  run.record.scenario_hash = scenario_hash;
  run.record.elements = arch.Elements();
  run.record.d_over_lambda = d_over_lambda;
  run.record.arch = arch.Label();
  run.record.mode = mode;
  run.record.gain = mode == CouplingMode::kWithMc ? run.result.gain
                                                  : ChannelGain(terms, run.result.z_i, config.numeric);
  run.record.iterations = run.result.iterations;
  run.record.termination = run.result.termination;
  run.record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

namespace
{

struct ScenarioKey
{
  int elements;
  double d;
  auto operator<=>(const ScenarioKey &) const = default;
};

// Builds (or loads) the terms of every requested scenario.
std::map<ScenarioKey, CachedTerms> BuildAll(const ScenarioConfig &base,
                                            const std::vector<ScenarioKey> &keys,
                                            const CacheOptions &cache, unsigned workers)
{
  std::vector<CachedTerms> built(keys.size());
  ParallelFor(
      keys.size(),
      [&](size_t i) {
        ScenarioConfig config = base;
        config.elements = keys[i].elements;
        config.spacing_over_lambda = keys[i].d;
        config.group_size = 1;
        config.grid.reset();
        built[i] = LoadOrBuildTerms(config, cache);
      },
      workers);
  std::map<ScenarioKey, CachedTerms> out;
  for (size_t i = 0; i < keys.size(); i++)
  {
    out.emplace(keys[i], std::move(built[i]));
  }
  return out;
}

std::vector<double> DescendingUnique(std::vector<double> values)
{
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

int ArchRank(const std::string &label)
{
  return label == "SC" ? 0 : label == "GC" ? 1 : 2;
}

std::vector<std::string> OrderedArchitectures(std::vector<std::string> labels)
{
  for (const auto &l : labels)
  {
    ArchitectureFor(l, 1, 1);  // rejects unknown labels
  }
  std::sort(labels.begin(), labels.end(),
            [](const auto &a, const auto &b) { return ArchRank(a) < ArchRank(b); });
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

}  // namespace

std::vector<ConvergenceRun> SweepConvergence(const ScenarioConfig &base, const SweepSpec &spec,
                                             const OptimizerConfig &config,
                                             const CacheOptions &cache, unsigned workers)
{
  const auto ds = DescendingUnique(spec.spacings_over_lambda);
  const auto labels = OrderedArchitectures(spec.architectures);
  std::vector<ScenarioKey> keys;
  for (double d : ds)
  {
    keys.push_back({base.elements, d});
  }
  const auto terms = BuildAll(base, keys, cache, workers);

  // Rows carry the requested label: GC coincides with SC or FC when M̄ = 1 or M̄ = M.
  struct Job
  {
    double d;
    std::string label;
    RisArchitecture arch;
  };
  std::vector<Job> jobs;
  for (double d : ds)
  {
    for (const auto &label : labels)
    {
      if (auto arch = ArchitectureFor(label, base.elements, spec.group_size))
      {
        jobs.push_back({d, label, *arch});
      }
    }
  }
  std::vector<std::optional<ConvergenceRun>> runs(jobs.size());
  ParallelFor(
      jobs.size(),
      [&](size_t i) {
        const auto &t = terms.at({base.elements, jobs[i].d});
        auto run = RunOne(t.terms, t.hash, jobs[i].arch, jobs[i].d, CouplingMode::kWithMc, config);
        runs[i] = ConvergenceRun{jobs[i].d, jobs[i].label, std::move(run.result)};
      },
      workers);
  std::vector<ConvergenceRun> out;
  for (auto &r : runs)
  {
    out.push_back(std::move(*r));
  }
  return out;
}

std::vector<RunRecord> SweepGain(const ScenarioConfig &base, const SweepSpec &spec,
                                 const OptimizerConfig &config, const CacheOptions &cache,
                                 unsigned workers)
{
  auto ms = spec.elements;
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  const auto ds = DescendingUnique(spec.spacings_over_lambda);
  const auto labels = OrderedArchitectures(spec.architectures);
  auto modes = spec.modes;
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());

  std::vector<ScenarioKey> keys;
  for (int m : ms)
  {
    for (double d : ds)
    {
      keys.push_back({m, d});
    }
  }
  const auto terms = BuildAll(base, keys, cache, workers);

  struct Job
  {
    ScenarioKey key;
    std::string label;
    RisArchitecture arch;
    CouplingMode mode;
  };
  std::vector<Job> jobs;
  for (const auto &key : keys)
  {
    for (const auto &label : labels)
    {
      if (auto arch = ArchitectureFor(label, key.elements, spec.group_size))
      {
        for (auto mode : modes)
        {
          jobs.push_back({key, label, *arch, mode});
        }
      }
    }
  }
  std::vector<RunRecord> records(jobs.size());
  ParallelFor(
      jobs.size(),
      [&](size_t i) {
        const auto &t = terms.at(jobs[i].key);
        records[i] =
            RunOne(t.terms, t.hash, jobs[i].arch, jobs[i].key.d, jobs[i].mode, config).record;
        records[i].arch = jobs[i].label;
      },
      workers);
  return records;
}

std::string FormatNumber(double value)
{
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, res.ptr);
}

void WriteTraceCsv(std::ostream &out, const std::vector<TraceRow> &trace)
{
  out << "iteration,c_linearized,gain_exact\n";
  for (const auto &row : trace)
  {
    out << row.iteration << ',' << FormatNumber(row.c_linearized) << ','
        << FormatNumber(row.gain_exact) << '\n';
  }
}

void WriteConvergenceCsv(std::ostream &out, const std::vector<ConvergenceRun> &runs)
{
  out << "d_over_lambda,arch,iteration,c_linearized,gain_exact\n";
  for (const auto &run : runs)
  {
    for (const auto &row : run.result.trace)
    {
      out << FormatNumber(run.d_over_lambda) << ',' << run.arch << ',' << row.iteration << ','
          << FormatNumber(row.c_linearized) << ',' << FormatNumber(row.gain_exact) << '\n';
    }
  }
}

void WriteGainCsv(std::ostream &out, const std::vector<RunRecord> &records)
{
  out << "M,d_over_lambda,arch,mode,gain\n";
  for (const auto &r : records)
  {
    out << r.elements << ',' << FormatNumber(r.d_over_lambda) << ',' << r.arch << ','
        << ToString(r.mode) << ',' << FormatNumber(r.gain) << '\n';
  }
}

nlohmann::json ToJson(const RunRecord &r)
{
  return {{"scenario_hash", r.scenario_hash},
          {"M", r.elements},
          {"d_over_lambda", r.d_over_lambda},
          {"arch", r.arch},
          {"mode", ToString(r.mode)},
          {"gain", r.gain},
          {"iterations", r.iterations},
          {"termination", ToString(r.termination)},
          {"wall_seconds", r.wall_seconds}};
}

nlohmann::json ConvergenceJson(const std::vector<ConvergenceRun> &runs)
{
  auto out = nlohmann::json::array();
  for (const auto &run : runs)
  {
    auto j = ToJson(run.result);
    j.erase("z_i");
    j["d_over_lambda"] = run.d_over_lambda;
    j["arch"] = run.arch;
    out.push_back(std::move(j));
  }
  return out;
}

nlohmann::json GainJson(const std::vector<RunRecord> &records)
{
  auto out = nlohmann::json::array();
  for (const auto &r : records)
  {
    out.push_back(ToJson(r));
  }
  return out;
}

}  // namespace bdris
