#pragma once

#include <stdexcept>
#include <string>

namespace windsweep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or schema problem.
class FormatError : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// Four sampled speeds do not determine a unique cubic.
class SingularSample : public Error {
 public:
  using Error::Error;
};

/// Every RANSAC draw was singular; no model could be fitted.
class DegenerateData : public Error {
 public:
  using Error::Error;
};

/// Normalization bounds collapse (max == min).
class DegenerateRange : public Error {
 public:
  using Error::Error;
};

/// The opened image has no foreground, so no envelope exists.
class EmptyOpening : public Error {
 public:
  using Error::Error;
};

/// Wraps an error raised inside a pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace windsweep
