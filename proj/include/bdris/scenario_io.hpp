// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_SCENARIO_IO_HPP
#define BDRIS_SCENARIO_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include "bdris/em_scenario.hpp"
#include "bdris/network.hpp"

namespace bdris
{

//
// Scenario configuration file (JSON). Keys:
//   frequency_ghz, tx_xyz, rx_xyz, m, spacing_over_lambda   required
//   group_size, grid ([rows, cols]), quadrature_order,
//   z_rt ([re, im]), z0, element_length_over_lambda, element_radius_over_lambda,
//   txrx_length_over_lambda, txrx_radius_over_lambda        optional
// Unknown keys are rejected. Errors are ConfigError naming the key, or the line and
// column of a syntax error.
//
ScenarioConfig ConfigFromJson(const nlohmann::json &j);
ScenarioConfig ParseConfig(const std::string &text);
ScenarioConfig LoadConfig(const std::filesystem::path &path);
nlohmann::json ToJson(const ScenarioConfig &config);

// 64-bit FNV-1a of the canonical JSON of everything that determines the channel terms.
std::uint64_t ScenarioHash(const ScenarioConfig &config, const QuadratureOptions &quadrature = {});
std::string HashHex(std::uint64_t hash);

nlohmann::json ToJson(const ChannelTerms &terms);
// Throws ConfigError on malformed input; validates the terms.
ChannelTerms ChannelTermsFromJson(const nlohmann::json &j);

struct CacheOptions
{
  bool enabled = true;
  // Empty: $BDRIS_CACHE_DIR, else ./.bdris-cache.
  std::filesystem::path directory;

  std::filesystem::path ResolvedDirectory() const;
};

struct CachedTerms
{
  ChannelTerms terms;
  std::string hash;
  bool from_cache = false;
};

// Loads the terms from the cache file keyed by the scenario hash, or builds them and
// writes the cache file (atomically, via rename). Unreadable cache files are rebuilt.
CachedTerms LoadOrBuildTerms(const ScenarioConfig &config, const CacheOptions &cache = {},
                             const QuadratureOptions &quadrature = {});

}  // namespace bdris

#endif  // BDRIS_SCENARIO_IO_HPP
