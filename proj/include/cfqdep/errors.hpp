#pragma once

#include <stdexcept>
#include <string>

namespace cfqdep {

// Base for everything this library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration: missing files, malformed rule tables, inconsistent
// options. Maps to CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// Bad input data: malformed corpus content, alignment mismatches,
// conversion failures. Maps to CLI exit code 1.
struct DataError : Error {
  using Error::Error;
};

}  // namespace cfqdep
