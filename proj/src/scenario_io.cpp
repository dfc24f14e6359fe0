// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include "bdris/scenario_io.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unistd.h>
#include "bdris/errors.hpp"

namespace bdris
{

namespace
{

const std::set<std::string> kRequiredKeys = {"frequency_ghz", "tx_xyz", "rx_xyz", "m",
                                             "spacing_over_lambda"};
const std::set<std::string> kOptionalKeys = {
    "group_size",        "grid", "quadrature_order", "z_rt", "z0", "element_length_over_lambda",
    "element_radius_over_lambda", "txrx_length_over_lambda", "txrx_radius_over_lambda"};

template <typename T>
T Get(const nlohmann::json &j, const std::string &key)
{
  try
  {
    return j.at(key).get<T>();
  }
  catch (const nlohmann::json::exception &)
  {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

Eigen::Vector3d GetPoint(const nlohmann::json &j, const std::string &key)
{
  const auto v = Get<std::vector<double>>(j, key);
  if (v.size() != 3)
  {
    throw ConfigError("config key '" + key + "' must be [x, y, z]");
  }
  return {v[0], v[1], v[2]};
}

// Line and column (1-based) of a byte offset.
std::pair<size_t, size_t> LineColumn(const std::string &text, size_t offset)
{
  size_t line = 1;
  size_t column = 1;
  for (size_t i = 0; i < offset && i < text.size(); i++)
  {
    if (text[i] == '\n')
    {
      line++;
      column = 1;
    }
    else
    {
      column++;
    }
  }
  return {line, column};
}

}  // namespace

ScenarioConfig ConfigFromJson(const nlohmann::json &j)
{
  if (!j.is_object())
  {
    throw ConfigError("config must be a JSON object");
  }
  for (const auto &key : kRequiredKeys)
  {
    if (!j.contains(key))
    {
      throw ConfigError("missing required config key '" + key + "'");
    }
  }
  for (const auto &[key, value] : j.items())
  {
    if (!kRequiredKeys.contains(key) && !kOptionalKeys.contains(key))
    {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  ScenarioConfig c;
  c.frequency_hz = Get<double>(j, "frequency_ghz") * 1e9;
  c.tx_position = GetPoint(j, "tx_xyz");
  c.rx_position = GetPoint(j, "rx_xyz");
  c.elements = Get<int>(j, "m");
  c.spacing_over_lambda = Get<double>(j, "spacing_over_lambda");
  if (j.contains("group_size"))
  {
    c.group_size = Get<int>(j, "group_size");
  }
  if (j.contains("grid"))
  {
    const auto g = Get<std::vector<int>>(j, "grid");
    if (g.size() != 2)
    {
      throw ConfigError("config key 'grid' must be [rows, cols]");
    }
    c.grid = GridLayout{g[0], g[1]};
  }
  if (j.contains("quadrature_order"))
  {
    c.quadrature_order = Get<int>(j, "quadrature_order");
  }
  if (j.contains("z_rt"))
  {
    try
    {
      c.z_rt_override = ComplexFromJson(j.at("z_rt"));
    }
    catch (const ConfigError &)
    {
      throw ConfigError("config key 'z_rt' must be [re, im] or a number");
    }
  }
  if (j.contains("z0"))
  {
    c.z0 = Get<double>(j, "z0");
  }
  if (j.contains("element_length_over_lambda"))
  {
    c.length_over_lambda = Get<double>(j, "element_length_over_lambda");
  }
  if (j.contains("element_radius_over_lambda"))
  {
    c.radius_over_lambda = Get<double>(j, "element_radius_over_lambda");
  }
  if (j.contains("txrx_length_over_lambda"))
  {
    c.txrx_length_over_lambda = Get<double>(j, "txrx_length_over_lambda");
  }
  if (j.contains("txrx_radius_over_lambda"))
  {
    c.txrx_radius_over_lambda = Get<double>(j, "txrx_radius_over_lambda");
  }
  c.Validate();
  return c;
}

ScenarioConfig ParseConfig(const std::string &text)
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(text);
  }
  catch (const nlohmann::json::parse_error &e)
  {
    const auto [line, column] = LineColumn(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("config syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(column));
  }
  return ConfigFromJson(j);
}

ScenarioConfig LoadConfig(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot read config file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  try
  {
    return ParseConfig(text.str());
  }
  catch (const ConfigError &e)
  {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json ToJson(const ScenarioConfig &c)
{
  const GridLayout layout = c.Layout();
  nlohmann::json j = {
      {"frequency_ghz", c.frequency_hz / 1e9},
      {"tx_xyz", {c.tx_position.x(), c.tx_position.y(), c.tx_position.z()}},
      {"rx_xyz", {c.rx_position.x(), c.rx_position.y(), c.rx_position.z()}},
      {"m", c.elements},
      {"spacing_over_lambda", c.spacing_over_lambda},
      {"group_size", c.group_size},
      {"grid", {layout.rows, layout.cols}},
      {"quadrature_order", c.quadrature_order},
      {"z0", c.z0},
      {"element_length_over_lambda", c.length_over_lambda},
      {"element_radius_over_lambda", c.radius_over_lambda},
  };
  if (c.z_rt_override)
  {
    j["z_rt"] = ToJson(*c.z_rt_override);
  }
  if (c.txrx_length_over_lambda)
  {
    j["txrx_length_over_lambda"] = *c.txrx_length_over_lambda;
  }
  if (c.txrx_radius_over_lambda)
  {
    j["txrx_radius_over_lambda"] = *c.txrx_radius_over_lambda;
  }
  return j;
}

std::uint64_t ScenarioHash(const ScenarioConfig &config, const QuadratureOptions &quadrature)
{
  nlohmann::json j = ToJson(config);
  // The group size does not affect the channel terms.
  j.erase("group_size");
  j["quadrature_relative_tolerance"] = quadrature.relative_tolerance;
  j["quadrature_max_panels_per_half"] = quadrature.max_panels_per_half;
  const std::string text = j.dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text)
  {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string HashHex(std::uint64_t hash)
{
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

nlohmann::json ToJson(const ChannelTerms &t)
{
  return {{"z_rt", ToJson(t.z_rt)},
          {"z_ri", ToJson(ComplexMatrix(t.z_ri))},
          {"z_ii", ToJson(t.z_ii)},
          {"z_it", ToJson(ComplexMatrix(t.z_it))},
          {"z0", t.z0}};
}

ChannelTerms ChannelTermsFromJson(const nlohmann::json &j)
{
  ChannelTerms t;
  try
  {
    t.z_rt = ComplexFromJson(j.at("z_rt"));
    const ComplexMatrix z_ri = MatrixFromJson(j.at("z_ri"));
    const ComplexMatrix z_it = MatrixFromJson(j.at("z_it"));
    t.z_ii = MatrixFromJson(j.at("z_ii"));
    t.z0 = j.at("z0").get<double>();
    if (z_ri.rows() != 1 || z_it.cols() != 1)
    {
      throw ConfigError("z_RI must be a row and z_IT a column");
    }
    t.z_ri = z_ri.row(0);
    t.z_it = z_it.col(0);
  }
  catch (const nlohmann::json::exception &e)
  {
    throw ConfigError(std::string("malformed channel terms: ") + e.what());
  }
  try
  {
    t.Validate();
  }
  catch (const ConfigError &)
  {
    throw;
  }
  catch (const Error &e)
  {
    throw ConfigError(std::string("invalid channel terms: ") + e.what());
  }
  return t;
}

std::filesystem::path CacheOptions::ResolvedDirectory() const
{
  if (!directory.empty())
  {
    return directory;
  }
  if (const char *env = std::getenv("BDRIS_CACHE_DIR"); env && *env)
  {
    return env;
  }
  return ".bdris-cache";
}

CachedTerms LoadOrBuildTerms(const ScenarioConfig &config, const CacheOptions &cache,
                             const QuadratureOptions &quadrature)
{
  config.Validate();
  CachedTerms out;
  out.hash = HashHex(ScenarioHash(config, quadrature));
  if (!cache.enabled)
  {
    out.terms = BuildScenario(config, quadrature);
    return out;
  }
  const auto dir = cache.ResolvedDirectory();
  const auto file = dir / ("terms-" + out.hash + ".json");
  if (std::ifstream in(file); in)
  {
    try
    {
      out.terms = ChannelTermsFromJson(nlohmann::json::parse(in));
      out.from_cache = true;
      return out;
    }
    catch (const std::exception &)
    {
      // Corrupt or stale cache entry: rebuild below.
    }
  }
  out.terms = BuildScenario(config, quadrature);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto tmp = file.string() + ".tmp-" + std::to_string(::getpid()) + "-" +
                   std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream o(tmp);
    if (o)
    {
      o << ToJson(out.terms).dump() << "\n";
    }
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec)
  {
    std::filesystem::remove(tmp, ec);
  }
  return out;
}

}  // namespace bdris
