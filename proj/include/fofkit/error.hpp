#pragma once

#include <stdexcept>
#include <string>

namespace fofkit {

// Error categories map one-to-one onto CLI exit codes (1, 2, 3).

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fofkit
