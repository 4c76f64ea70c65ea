#pragma once

#include <stdexcept>

namespace geocollab {

/// Bad configuration: missing files, inconsistent options. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data cannot support the requested computation. CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace geocollab
