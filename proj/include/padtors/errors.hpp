#pragma once

#include <stdexcept>
#include <string>

namespace padtors {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A result would carry no certified digit, or a division by a value that
/// is indistinguishable from zero at its precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of an operation (non-square, wrong prime,
/// point outside the kernel of reduction, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Newton/Hensel iteration failed: hypothesis not met or convergence stalled.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::string transcript_json)
      : Error(what), transcript_(std::move(transcript_json)) {}
  explicit ConvergenceError(const std::string& what) : Error(what) {}

  const std::string& transcript() const noexcept { return transcript_; }

 private:
  std::string transcript_;
};

/// An independent check disagreed with a claimed result.
class CertificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace padtors
