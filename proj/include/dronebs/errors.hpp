#pragma once

#include <stdexcept>
#include <string>

namespace dronebs {

/// Invalid user-supplied configuration (bad key, type, or invariant).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A model-level failure: an operation was asked for something its
/// domain does not admit (e.g. an unserveable link, an empty CDF).
class ModelError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace dronebs
