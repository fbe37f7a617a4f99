#pragma once

#include <stdexcept>
#include <string>

namespace ergmk {

/// Malformed or inconsistent model/run configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact enumeration requested beyond the state-space cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The positive pattern of a rate matrix is not strongly connected.
struct ReducibleChain : std::runtime_error {
  ReducibleChain(const std::string& what, int components)
      : std::runtime_error(what), components(components) {}
  int components;
};

/// Exit rate of the current state is zero.
struct AbsorbingState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ergmk
