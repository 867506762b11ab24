#pragma once

#include <stdexcept>
#include <string>

namespace qcompat {

enum class ErrorCode {
  InvalidInput,
  NotPsd,
  TooManyMeasurements,
  NotAnEffectTuple,
  TooLarge,
  NumericalLimit,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

class InvalidInput : public Error {
public:
  explicit InvalidInput(const std::string& message)
      : Error(ErrorCode::InvalidInput, message) {}
};

class NotPsd : public Error {
public:
  NotPsd(const std::string& message, double min_eigenvalue)
      : Error(ErrorCode::NotPsd, message), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
  double min_eigenvalue_;
};

class TooManyMeasurements : public Error {
public:
  TooManyMeasurements(int g, int limit)
      : Error(ErrorCode::TooManyMeasurements,
              "g = " + std::to_string(g) + " exceeds the limit " + std::to_string(limit)) {}
};

/// An operator in a supposed effect tuple has spectrum outside [0, 1].
class NotAnEffectTuple : public Error {
public:
  NotAnEffectTuple(int index, double eigenvalue)
      : Error(ErrorCode::NotAnEffectTuple,
              "component " + std::to_string(index) + " has eigenvalue " +
                  std::to_string(eigenvalue) + " outside [0, 1]"),
        index_(index), eigenvalue_(eigenvalue) {}

  int index() const noexcept { return index_; }
  double eigenvalue() const noexcept { return eigenvalue_; }

private:
  int index_;
  double eigenvalue_;
};

class TooLarge : public Error {
public:
  explicit TooLarge(const std::string& message) : Error(ErrorCode::TooLarge, message) {}
};

class NumericalLimit : public Error {
public:
  explicit NumericalLimit(const std::string& message)
      : Error(ErrorCode::NumericalLimit, message) {}
};

} // namespace qcompat
