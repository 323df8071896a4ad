#pragma once

#include <stdexcept>

namespace scenaug {

// Error categories; the CLI maps them to exit codes 2 / 3 / 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace scenaug
