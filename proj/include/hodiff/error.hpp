#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hodiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched shapes, empty inputs, out-of-range orders.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Evaluation outside a function's natural domain (log of zero, x outside Omega, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Overflow or a non-finite value produced by an evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::string expected)
      : Error("syntax error at offset " + std::to_string(offset) + ": expected " + expected),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class RecoveryError : public Error {
 public:
  RecoveryError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}

  // 1-norm condition estimate of the probe system; +inf when singular.
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hodiff
