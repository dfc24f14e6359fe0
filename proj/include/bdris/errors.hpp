// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_ERRORS_HPP
#define BDRIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdris
{

// Root of every error thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A linear system was numerically singular (reciprocal condition number below the
// configured threshold).
class SingularMatrix : public Error
{
public:
  SingularMatrix(const std::string &what, double rcond)
    : Error(what + " (rcond = " + std::to_string(rcond) + ")"), rcond_(rcond)
  {
  }
  double rcond() const { return rcond_; }

private:
  double rcond_;
};

class DimensionMismatch : public Error
{
public:
  using Error::Error;
};

class NonFiniteValue : public Error
{
public:
  using Error::Error;
};

// Blocks that must vanish under the unilateral/matched-port assumptions do not.
class AssumptionViolation : public Error
{
public:
  using Error::Error;
};

class ThetaNearIdentity : public Error
{
public:
  using Error::Error;
};

class InvalidArchitecture : public Error
{
public:
  using Error::Error;
};

class InvalidImpedance : public Error
{
public:
  using Error::Error;
};

class InvalidGeometry : public Error
{
public:
  using Error::Error;
};

class QuadratureNotConverged : public Error
{
public:
  using Error::Error;
};

class CostGuard : public Error
{
public:
  using Error::Error;
};

class NonMonotoneBeyondSlack : public Error
{
public:
  NonMonotoneBeyondSlack(const std::string &what, int iteration)
    : Error(what), iteration_(iteration)
  {
  }
  int iteration() const { return iteration_; }

private:
  int iteration_;
};

// Configuration file problems; the message names the offending key or location.
class ConfigError : public Error
{
public:
  using Error::Error;
};

}  // namespace bdris

#endif  // BDRIS_ERRORS_HPP
