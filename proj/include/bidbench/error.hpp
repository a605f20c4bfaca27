#pragma once

#include <stdexcept>
#include <string>

namespace bidbench {

// Bad arguments or violated preconditions (sizes, ranges, policies).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A required input asset is missing or unreadable as an asset.
class AssetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem / encoding failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bidbench
