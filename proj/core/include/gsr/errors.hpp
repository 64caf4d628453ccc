#pragma once

#include <stdexcept>

namespace gsr {

/// Shapes or scale factors inconsistent with an operation.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// On-disk bundle missing, truncated or malformed.
class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or contradictory benchmark configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A fit produced a non-finite loss.
class divergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gsr
