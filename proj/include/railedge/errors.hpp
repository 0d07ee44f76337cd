#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace railedge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid or kernel shapes are incompatible with the requested operation.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument violates a documented precondition (non-finite values,
/// even box size, non-binary mask, bad config field, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read, parsed or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class TrainingError : public Error {
 public:
  TrainingError(std::size_t step, const std::string& what)
      : Error(what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace railedge
