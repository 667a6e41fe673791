#pragma once

#include <stdexcept>
#include <string>

namespace framelet {

// Base class for everything thrown by this library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Bad argument values: domain violations, mismatched dimensions,
// parameters outside the range a formula is valid for.
class argument_error : public error {
 public:
  explicit argument_error(const std::string& what) : error(what) {}
};

// Malformed or inconsistent configuration input (CLI / JSON).
class config_error : public error {
 public:
  explicit config_error(const std::string& what) : error(what) {}
};

// The requested instance would exceed a memory or cardinality guard.
// The message names the offending count and the largest setting that fits.
class resource_error : public error {
 public:
  explicit resource_error(const std::string& what) : error(what) {}
};

// Operation is well-posed in general but not available for this input
// (e.g. asking for mask coefficients of a non-polynomial mask).
class unsupported_error : public error {
 public:
  explicit unsupported_error(const std::string& what) : error(what) {}
};

// A cross-check failed: a numerically estimated quantity disagrees with a
// declared one, or an internal residual check did not come back clean.
class consistency_error : public error {
 public:
  explicit consistency_error(const std::string& what) : error(what) {}
};

// Non-finite sample values or otherwise unusable numeric data.
class data_error : public error {
 public:
  explicit data_error(const std::string& what) : error(what) {}
};

}  // namespace framelet
