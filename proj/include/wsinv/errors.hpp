#pragma once

#include <stdexcept>

namespace wsinv {

// Input fails a documented precondition or an assumption without override.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document (JSON shape, missing keys, bad literals).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine could not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sampled configuration was too degenerate to evaluate; resample.
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wsinv
