// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: scenario construction, single optimizations and the
// convergence / gain-versus-M sweeps.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include "bdris/errors.hpp"
#include "bdris/experiment.hpp"

namespace
{

constexpr int kExitConverged = 0;
constexpr int kExitFailure = 1;
constexpr int kExitMaxIterations = 2;
constexpr int kExitSingular = 3;
constexpr int kExitUsage = 64;

struct CommonFlags
{
  std::string config_path;
  std::optional<int> quadrature_order;
  bool no_cache = false;
  std::string out_dir = ".";
  std::string format = "csv";
};

struct OptimizerFlags
{
  double delta = 6e-4;
  double tol = 1e-8;
  int max_iter = 20000;
  std::string step_control = "adaptive";
  bool neumann_guard = false;

  bdris::OptimizerConfig ToConfig() const
  {
    bdris::OptimizerConfig c;
    c.delta = delta;
    c.relative_tolerance = tol;
    c.max_iterations = max_iter;
    c.step_control =
        step_control == "fixed" ? bdris::StepControl::kFixed : bdris::StepControl::kAdaptive;
    c.neumann_guard = neumann_guard;
    c.Validate();
    return c;
  }
};

void AddCommon(CLI::App *cmd, CommonFlags &f)
{
  cmd->add_option("--config", f.config_path, "Scenario configuration file (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--quadrature-order", f.quadrature_order, "Gauss-Legendre points per panel")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-cache", f.no_cache, "Recompute the channel terms, bypassing the cache");
  cmd->add_option("--out", f.out_dir, "Output directory");
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

void AddOptimizer(CLI::App *cmd, OptimizerFlags &f)
{
  cmd->add_option("--delta", f.delta, "Increment modulus (ohm)")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", f.tol, "Relative change of C that stops the iteration")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--step-control", f.step_control,
                  "fixed: constant delta; adaptive: halve delta on a decrease")
      ->check(CLI::IsMember({"fixed", "adaptive"}));
  cmd->add_flag("--neumann-guard", f.neumann_guard,
                "Monitor the linearization validity and fail on a gain decrease");
}

bdris::ScenarioConfig BaseConfig(const CommonFlags &f)
{
  bdris::ScenarioConfig c = f.config_path.empty() ? bdris::ScenarioConfig{}
                                                  : bdris::LoadConfig(f.config_path);
  if (f.quadrature_order)
  {
    c.quadrature_order = *f.quadrature_order;
  }
  return c;
}

bdris::CacheOptions Cache(const CommonFlags &f)
{
  bdris::CacheOptions c;
  c.enabled = !f.no_cache;
  return c;
}

std::filesystem::path OutputDir(const CommonFlags &f)
{
  std::filesystem::path dir(f.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void WriteFile(const std::filesystem::path &path, const std::string &content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw bdris::Error("cannot write " + path.string());
  }
  out << content;
}

int ExitCode(bdris::Termination t)
{
  switch (t)
  {
    case bdris::Termination::kConverged:
      return kExitConverged;
    case bdris::Termination::kMaxIterations:
      return kExitMaxIterations;
    case bdris::Termination::kSingular:
      return kExitSingular;
  }
  return kExitFailure;
}

int CmdScenario(const CommonFlags &f, std::optional<int> m, const std::vector<double> &d)
{
  auto config = BaseConfig(f);
  if (m)
  {
    config.elements = *m;
    config.grid.reset();
    config.group_size = 1;
  }
  if (!d.empty())
  {
    config.spacing_over_lambda = d.front();
  }
  config.Validate();
  const auto cached = bdris::LoadOrBuildTerms(config, Cache(f));
  const auto k = bdris::DerivedConstants::FromFrequency(config.frequency_hz);
  const auto layout = config.Layout();
  const auto s = bdris::SummarizeCoupling(cached.terms);
  const auto dir = OutputDir(f);
  WriteFile(dir / "terms.json", bdris::ToJson(cached.terms).dump(2) + "\n");

  std::printf("scenario %s (%s)\n", cached.hash.c_str(), cached.from_cache ? "cached" : "computed");
  std::printf("frequency_hz       %.10g\n", config.frequency_hz);
  std::printf("wavelength_m       %.10g\n", k.wavelength);
  std::printf("tx_xyz             %g %g %g\n", config.tx_position.x(), config.tx_position.y(),
              config.tx_position.z());
  std::printf("rx_xyz             %g %g %g\n", config.rx_position.x(), config.rx_position.y(),
              config.rx_position.z());
  std::printf("elements           %d (%d x %d)\n", config.elements, layout.rows, layout.cols);
  std::printf("spacing_over_lambda %g\n", config.spacing_over_lambda);
  std::printf("max_offdiag_abs    %.6e ohm\n", s.max_offdiag_abs);
  std::printf("self_resistance    [%.6e, %.6e] ohm\n", s.min_self_resistance, s.max_self_resistance);
  std::printf("self_reactance     [%.6e, %.6e] ohm\n", s.min_self_reactance, s.max_self_reactance);
  return kExitConverged;
}

int CmdOptimize(const CommonFlags &f, const OptimizerFlags &of, std::optional<int> m,
                std::optional<int> g, const std::vector<double> &d)
{
  auto config = BaseConfig(f);
  if (m)
  {
    config.elements = *m;
    config.grid.reset();
    config.group_size = 1;
  }
  if (!d.empty())
  {
    config.spacing_over_lambda = d.front();
  }
  const int groups = g.value_or(config.elements / config.group_size);
  const auto arch = bdris::RisArchitecture::Make(config.elements, groups);
  config.group_size = arch.GroupSize();
  config.Validate();
  const auto opt = of.ToConfig();
  const auto cached = bdris::LoadOrBuildTerms(config, Cache(f));
  const auto run = bdris::RunOne(cached.terms, cached.hash, arch, config.spacing_over_lambda,
                                 bdris::CouplingMode::kWithMc, opt);

  const auto dir = OutputDir(f);
  std::ostringstream csv;
  bdris::WriteTraceCsv(csv, run.result.trace);
  WriteFile(dir / "trace.csv", csv.str());
  auto result = bdris::ToJson(run.result);
  result["record"] = bdris::ToJson(run.record);
  WriteFile(dir / "result.json", result.dump(2) + "\n");

  std::printf("%s M=%d G=%d d/lambda=%g gain=%.10e iterations=%d termination=%s\n",
              arch.Label().c_str(), arch.Elements(), arch.Groups(), config.spacing_over_lambda,
              run.record.gain, run.record.iterations, bdris::ToString(run.record.termination).c_str());
  if (run.result.guard_warnings > 0)
  {
    std::fprintf(stderr,
                 "warning: delta exceeded 1%% of 1/(group size * ||(Z_II + Z_I)^-1||_inf) on %d "
                 "iterations\n",
                 run.result.guard_warnings);
  }
  return ExitCode(run.record.termination);
}

bdris::SweepSpec MakeSpec(const std::vector<int> &ms, const std::vector<double> &ds)
{
  bdris::SweepSpec spec;
  if (!ms.empty())
  {
    spec.elements = ms;
  }
  if (!ds.empty())
  {
    spec.spacings_over_lambda = ds;
  }
  return spec;
}

int CmdSweepConvergence(const CommonFlags &f, const OptimizerFlags &of, std::optional<int> m,
                        const std::vector<double> &d, unsigned workers)
{
  auto config = BaseConfig(f);
  if (m)
  {
    config.elements = *m;
    config.grid.reset();
  }
  config.group_size = 1;
  const auto runs = bdris::SweepConvergence(config, MakeSpec({}, d), of.ToConfig(), Cache(f), workers);
  const auto dir = OutputDir(f);
  if (f.format == "csv")
  {
    std::ostringstream csv;
    bdris::WriteConvergenceCsv(csv, runs);
    WriteFile(dir / "fig2.csv", csv.str());
  }
  else
  {
    WriteFile(dir / "fig2.json", bdris::ConvergenceJson(runs).dump(2) + "\n");
  }
  for (const auto &r : runs)
  {
    std::printf("d/lambda=%g %s gain=%.10e iterations=%d termination=%s\n", r.d_over_lambda,
                r.arch.c_str(), r.result.gain, r.result.iterations,
                bdris::ToString(r.result.termination).c_str());
  }
  return kExitConverged;
}

int CmdSweepGain(const CommonFlags &f, const OptimizerFlags &of, const std::vector<int> &ms,
                 const std::vector<double> &d, unsigned workers)
{
  auto config = BaseConfig(f);
  config.grid.reset();
  config.group_size = 1;
  const auto records = bdris::SweepGain(config, MakeSpec(ms, d), of.ToConfig(), Cache(f), workers);
  const auto dir = OutputDir(f);
  if (f.format == "csv")
  {
    std::ostringstream csv;
    bdris::WriteGainCsv(csv, records);
    WriteFile(dir / "fig3.csv", csv.str());
  }
  else
  {
    WriteFile(dir / "fig3.json", bdris::GainJson(records).dump(2) + "\n");
  }
  for (const auto &r : records)
  {
    std::printf("M=%d d/lambda=%g %s %s gain=%.10e iterations=%d\n", r.elements, r.d_over_lambda,
                r.arch.c_str(), bdris::ToString(r.mode).c_str(), r.gain, r.iterations);
  }
  return kExitConverged;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"BD-RIS link model with mutual coupling and impedance-network optimizer"};
  app.require_subcommand(1);

  CommonFlags common;
  OptimizerFlags optimizer;
  std::optional<int> m;
  std::optional<int> g;
  std::vector<int> ms;
  std::vector<double> d;
  unsigned workers = 0;

  auto *scenario = app.add_subcommand("scenario", "Build (or load) the channel terms and summarize them");
  AddCommon(scenario, common);
  scenario->add_option("--m", m, "Number of surface elements")->check(CLI::PositiveNumber);
  scenario->add_option("--d", d, "Element spacing as a fraction of the wavelength")
      ->check(CLI::PositiveNumber);

  auto *optimize = app.add_subcommand("optimize", "Optimize the tunable impedance network");
  AddCommon(optimize, common);
  AddOptimizer(optimize, optimizer);
  optimize->add_option("--m", m, "Number of surface elements")->check(CLI::PositiveNumber);
  optimize->add_option("--g", g, "Number of groups G (G = M: single-, G = 1: fully-connected)")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--d", d, "Element spacing as a fraction of the wavelength")
      ->check(CLI::PositiveNumber);

  auto *sweep_conv = app.add_subcommand("sweep-convergence", "Gain traces for SC, GC and FC per spacing");
  AddCommon(sweep_conv, common);
  AddOptimizer(sweep_conv, optimizer);
  sweep_conv->add_option("--m", m, "Number of surface elements")->check(CLI::PositiveNumber);
  sweep_conv->add_option("--d", d, "Spacing as a fraction of the wavelength (repeatable)")
      ->check(CLI::PositiveNumber);
  sweep_conv->add_option("--workers", workers, "Worker threads (0: hardware concurrency)");

  auto *sweep_gain = app.add_subcommand("sweep-gain", "Gain versus M with and without coupling");
  AddCommon(sweep_gain, common);
  AddOptimizer(sweep_gain, optimizer);
  sweep_gain->add_option("--m", ms, "Number of surface elements (repeatable)")
      ->check(CLI::PositiveNumber);
  sweep_gain->add_option("--d", d, "Spacing as a fraction of the wavelength (repeatable)")
      ->check(CLI::PositiveNumber);
  sweep_gain->add_option("--workers", workers, "Worker threads (0: hardware concurrency)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try
  {
    if (scenario->parsed())
    {
      return CmdScenario(common, m, d);
    }
    if (optimize->parsed())
    {
      return CmdOptimize(common, optimizer, m, g, d);
    }
    if (sweep_conv->parsed())
    {
      return CmdSweepConvergence(common, optimizer, m, d, workers);
    }
    return CmdSweepGain(common, optimizer, ms, d, workers);
  }
  catch (const bdris::ConfigError &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  catch (const bdris::InvalidArchitecture &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  catch (const bdris::SingularMatrix &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSingular;
  }
  catch (const std::exception &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
}
