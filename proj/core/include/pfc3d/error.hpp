#pragma once

#include <stdexcept>
#include <string>

namespace pfc3d {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on shapes, axes or parameters was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// The pointwise 3x3 system in the smoother had a vanishing determinant.
class SingularSystemError : public Error {
 public:
  SingularSystemError(const std::string& what, int i, int j, int k)
      : Error(what), i_(i), j_(j), k_(k) {}
  int i() const { return i_; }
  int j() const { return j_; }
  int k() const { return k_; }

 private:
  int i_, j_, k_;
};

/// A nonlinear solve did not reach its tolerance.
class SolverError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pfc3d
