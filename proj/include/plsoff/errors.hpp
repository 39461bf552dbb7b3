#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace plsoff {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSchemeError : public Error {
 public:
  UnknownSchemeError(const std::string& name, const std::string& suggestion)
      : Error("unknown scheme '" + name + "'; did you mean '" + suggestion + "'?"),
        suggestion_(suggestion) {}
  const std::string& suggestion() const noexcept { return suggestion_; }

 private:
  std::string suggestion_;
};

class InvalidConfigError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// No anchor tried gave every offloader a positive surrogate secrecy rate.
/// offenders() lists the devices whose rate stayed nonpositive.
class InfeasibleStartError : public Error {
 public:
  explicit InfeasibleStartError(std::vector<int> offenders)
      : Error("infeasible start: " + std::to_string(offenders.size()) +
              " offloading device(s) have no positive secrecy rate"),
        offenders_(std::move(offenders)) {}
  const std::vector<int>& offenders() const noexcept { return offenders_; }

 private:
  std::vector<int> offenders_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace plsoff
