#pragma once

#include <stdexcept>
#include <string>

namespace tomorisk {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidState : public Error {
 public:
  explicit InvalidState(const std::string& what) : Error("invalid state: " + what) {}
};

class InvalidDataset : public Error {
 public:
  explicit InvalidDataset(const std::string& what) : Error("invalid dataset: " + what) {}
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what) : Error("invalid parameter: " + what) {}
};

// Scaled risk difference requested where at least one risk diverges.
class UndefinedDifference : public Error {
 public:
  explicit UndefinedDifference(const std::string& what) : Error("undefined difference: " + what) {}
};

// Observed data has zero likelihood under every prior point.
class ImpossibleData : public Error {
 public:
  explicit ImpossibleData(const std::string& what) : Error("impossible data: " + what) {}
};

// Every candidate has infinite posterior loss.
class DegenerateLoss : public Error {
 public:
  explicit DegenerateLoss(const std::string& what) : Error("degenerate loss: " + what) {}
};

}  // namespace tomorisk
