#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace freqids {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what, std::size_t expected, std::size_t got)
      : Error(what + ": expected " + std::to_string(expected) + ", got " + std::to_string(got)) {}
};

class MalformedHeader : public Error {
 public:
  using Error::Error;
};

class RowParseError : public Error {
 public:
  RowParseError(std::size_t line, const std::string& why)
      : Error("line " + std::to_string(line) + ": " + why), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyFlow : public Error {
 public:
  EmptyFlow() : Error("flow has no packets") {}
};

class InsufficientSamples : public Error {
 public:
  InsufficientSamples(std::size_t count, std::size_t clusters)
      : Error("insufficient samples: " + std::to_string(count) + " samples for " +
              std::to_string(clusters) + " clusters"),
        count_(count),
        clusters_(clusters) {}

  std::size_t count() const noexcept { return count_; }
  std::size_t clusters() const noexcept { return clusters_; }

 private:
  std::size_t count_;
  std::size_t clusters_;
};

class SingleClass : public Error {
 public:
  SingleClass() : Error("labels contain a single class") {}
};

class NoPositives : public Error {
 public:
  NoPositives() : Error("no malicious samples; TPR undefined") {}
};

class NoNegatives : public Error {
 public:
  NoNegatives() : Error("no benign samples; FPR undefined") {}
};

class NonPositiveSigma : public Error {
 public:
  NonPositiveSigma() : Error("sigma must be positive") {}
};

class NonStationary : public Error {
 public:
  NonStationary() : Error("process must be stationary with zero mean") {}
};

class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class InvalidProfile : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace freqids
