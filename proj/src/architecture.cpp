// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#include "bdris/architecture.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include "bdris/errors.hpp"

namespace bdris
{

RisArchitecture RisArchitecture::Make(int elements, int groups)
{
  if (elements < 1 || groups < 1)
  {
    throw InvalidArchitecture("architecture requires M >= 1 and G >= 1 (got M = " +
                              std::to_string(elements) + ", G = " + std::to_string(groups) + ")");
  }
  if (elements % groups != 0)
  {
    throw InvalidArchitecture("G = " + std::to_string(groups) + " does not divide M = " +
                              std::to_string(elements));
  }
  return RisArchitecture(elements, groups);
}

std::string RisArchitecture::Label() const
{
  if (IsSingleConnected())
  {
    return "SC";
  }
  if (IsFullyConnected())
  {
    return "FC";
  }
  return "GC";
}

TunableImpedance::TunableImpedance(RisArchitecture arch)
  : arch_(arch),
    packed_(arch.Groups(), std::vector<double>(bdris::PackedSize(arch.GroupSize()), 0.0))
{
}

TunableImpedance::TunableImpedance(RisArchitecture arch, std::vector<std::vector<double>> packed)
  : arch_(arch), packed_(std::move(packed))
{
  if (static_cast<int>(packed_.size()) != arch_.Groups())
  {
    throw DimensionMismatch("tunable impedance needs one packed block per group");
  }
  for (const auto &block : packed_)
  {
    if (static_cast<int>(block.size()) != bdris::PackedSize(arch_.GroupSize()))
    {
      throw DimensionMismatch("packed block must hold M̄(M̄+1)/2 reactances");
    }
    for (double x : block)
    {
      if (!std::isfinite(x))
      {
        throw NonFiniteValue("tunable impedance reactance is not finite");
      }
    }
  }
}

TunableImpedance TunableImpedance::FromDiagonal(RisArchitecture arch, std::span<const double> reactance)
{
  if (static_cast<int>(reactance.size()) != arch.Elements())
  {
    throw DimensionMismatch("diagonal tuning needs M reactances");
  }
  TunableImpedance z(arch);
  const int size = arch.GroupSize();
  for (int m = 0; m < arch.Elements(); m++)
  {
    const int local = m % size;
    z.packed_[m / size][PackedIndex(local, local)] = reactance[m];
  }
  for (double x : reactance)
  {
    if (!std::isfinite(x))
    {
      throw NonFiniteValue("tunable impedance reactance is not finite");
    }
  }
  return z;
}

ComplexMatrix TunableImpedance::Block(int group) const
{
  const int size = arch_.GroupSize();
  ComplexMatrix block(size, size);
  for (int r = 0; r < size; r++)
  {
    for (int c = 0; c < size; c++)
    {
      block(r, c) = Complex(0.0, Reactance(group, r, c));
    }
  }
  return block;
}

ComplexMatrix TunableImpedance::Dense() const
{
  const int size = arch_.GroupSize();
  ComplexMatrix dense = ComplexMatrix::Zero(arch_.Elements(), arch_.Elements());
  for (int g = 0; g < arch_.Groups(); g++)
  {
    dense.block(g * size, g * size, size, size) = Block(g);
  }
  return dense;
}

ValidationReport ValidateImpedance(const ComplexMatrix &z_i, const RisArchitecture &arch, double tol)
{
  using Kind = ImpedanceViolation::Kind;
  const Index m = arch.Elements();
  auto violation = [](Kind kind, Index r, Index c, const std::string &what) {
    return ValidationReport{ImpedanceViolation{
        kind, r, c, what + " at (" + std::to_string(r) + ", " + std::to_string(c) + ")"}};
  };
  if (z_i.rows() != m || z_i.cols() != m)
  {
    return ValidationReport{ImpedanceViolation{Kind::kDimension, z_i.rows(), z_i.cols(),
                                               "Z_I must be M x M"}};
  }
  const int size = arch.GroupSize();
  for (Index r = 0; r < m; r++)
  {
    for (Index c = 0; c < m; c++)
    {
      const Complex v = z_i(r, c);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      {
        return violation(Kind::kNonFinite, r, c, "non-finite entry");
      }
      if (r / size != c / size)
      {
        if (std::abs(v) > tol)
        {
          return violation(Kind::kOffGroup, r, c, "nonzero entry outside the group blocks");
        }
        continue;
      }
      if (std::abs(v.real()) > tol)
      {
        return violation(Kind::kRealPart, r, c, "nonzero real part");
      }
      if (std::abs(v - z_i(c, r)) > tol)
      {
        return violation(Kind::kAsymmetric, r, c, "asymmetric entry");
      }
    }
  }
  return {};
}

SymmetryMap::SymmetryMap(int group_size) : group_size_(group_size)
{
  if (group_size < 1)
  {
    throw InvalidArchitecture("group size must be positive");
  }
  row_to_col_.resize(static_cast<size_t>(group_size) * group_size);
  for (int m = 0; m < group_size; m++)
  {
    for (int n = 0; n < group_size; n++)
    {
      row_to_col_[m * group_size + n] = PackedIndex(n, m);
    }
  }
}

std::shared_ptr<const SymmetryMap> SymmetryMap::Get(int group_size)
{
  static std::shared_mutex mutex;
  static std::map<int, std::shared_ptr<const SymmetryMap>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(group_size); it != cache.end())
    {
      return it->second;
    }
  }
  auto map = std::make_shared<const SymmetryMap>(group_size);
  std::unique_lock lock(mutex);
  return cache.emplace(group_size, std::move(map)).first->second;
}

Eigen::MatrixXd SymmetryMap::Dense() const
{
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(static_cast<Index>(row_to_col_.size()), PackedSize());
  for (size_t row = 0; row < row_to_col_.size(); row++)
  {
    p(static_cast<Index>(row), row_to_col_[row]) = 1.0;
  }
  return p;
}

ComplexRowVector SymmetryMap::RightMultiply(const ComplexRowVector &e) const
{
  if (e.size() != static_cast<Index>(row_to_col_.size()))
  {
    throw DimensionMismatch("e must have M̄^2 entries");
  }
  ComplexRowVector out = ComplexRowVector::Zero(PackedSize());
  for (size_t row = 0; row < row_to_col_.size(); row++)
  {
    out(row_to_col_[row]) += e(static_cast<Index>(row));
  }
  return out;
}

ComplexMatrix ExpandIncrement(const ComplexVector &omega, const SymmetryMap &p)
{
  if (omega.size() != p.PackedSize())
  {
    throw DimensionMismatch("omega has " + std::to_string(omega.size()) + " entries, expected " +
                            std::to_string(p.PackedSize()));
  }
  const int size = p.GroupSize();
  ComplexMatrix block(size, size);
  const auto &map = p.RowToColumn();
  for (int m = 0; m < size; m++)
  {
    for (int n = 0; n < size; n++)
    {
      // Column-major vec: position m * M̄ + n is entry (n, m).
      block(n, m) = omega(map[m * size + n]);
    }
  }
  return block;
}

ComplexMatrix AssembleBlockDiagonal(const std::vector<ComplexMatrix> &blocks)
{
  if (blocks.empty())
  {
    return ComplexMatrix(0, 0);
  }
  const Index size = blocks.front().rows();
  for (const auto &b : blocks)
  {
    if (b.rows() != size || b.cols() != size)
    {
      throw DimensionMismatch("blocks must be square with a common size");
    }
  }
  const Index m = size * static_cast<Index>(blocks.size());
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (size_t g = 0; g < blocks.size(); g++)
  {
    out.block(static_cast<Index>(g) * size, static_cast<Index>(g) * size, size, size) = blocks[g];
  }
  return out;
}

TunableImpedance InitNoMc(const ChannelTerms &terms, const RisArchitecture &arch)
{
  const Index m = terms.Elements();
  if (m != arch.Elements())
  {
    throw DimensionMismatch("architecture and channel terms disagree on M");
  }
  std::vector<Complex> c(m);
  Complex center = terms.z_rt;
  for (Index i = 0; i < m; i++)
  {
    const double r = terms.z_ii(i, i).real();
    if (!(r > 0.0))
    {
      throw InvalidImpedance("self resistance of element " + std::to_string(i) +
                             " must be positive");
    }
    c[i] = terms.z_ri(i) * terms.z_it(i) / r;
    center -= 0.5 * c[i];
  }
  const double anchor = std::abs(center) > 0.0 ? std::arg(center) : 0.0;
  constexpr double kMaxHalfAngle = std::numbers::pi / 2.0 - 1e-9;
  std::vector<double> x(m);
  for (Index i = 0; i < m; i++)
  {
    // Rotate -c_m exp(-2j beta) onto the anchor direction.
    double gamma = std::arg(-c[i]) - anchor;
    gamma = std::remainder(gamma, 2.0 * std::numbers::pi);
    const double beta = std::clamp(0.5 * gamma, -kMaxHalfAngle, kMaxHalfAngle);
    x[i] = terms.z_ii(i, i).real() * std::tan(beta) - terms.z_ii(i, i).imag();
  }
  return TunableImpedance::FromDiagonal(arch, x);
}

nlohmann::json ToJson(const TunableImpedance &z_i)
{
  const auto &arch = z_i.Architecture();
  auto blocks = nlohmann::json::array();
  for (int g = 0; g < arch.Groups(); g++)
  {
    const auto packed = z_i.Packed(g);
    blocks.push_back(std::vector<double>(packed.begin(), packed.end()));
  }
  return {{"M", arch.Elements()}, {"G", arch.Groups()}, {"blocks", blocks}};
}

TunableImpedance TunableImpedanceFromJson(const nlohmann::json &j)
{
  try
  {
    const auto arch = RisArchitecture::Make(j.at("M").get<int>(), j.at("G").get<int>());
    return TunableImpedance(arch, j.at("blocks").get<std::vector<std::vector<double>>>());
  }
  catch (const nlohmann::json::exception &e)
  {
    throw ConfigError(std::string("invalid tunable impedance JSON: ") + e.what());
  }
  catch (const Error &e)
  {
    throw ConfigError(std::string("invalid tunable impedance JSON: ") + e.what());
  }
}

}  // namespace bdris
