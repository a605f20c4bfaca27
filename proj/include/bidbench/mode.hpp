#pragma once

#include <string>
#include <string_view>

#include "bidbench/error.hpp"

namespace bidbench {

// Train draws parameters at random; test pins them to fixed values.
enum class Mode { kTrain, kTest };

inline std::string_view to_string(Mode m) noexcept { return m == Mode::kTrain ? "train" : "test"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "train") return Mode::kTrain;
  if (s == "test") return Mode::kTest;
  throw InvalidArgument("unknown mode: " + std::string(s));
}

}  // namespace bidbench
