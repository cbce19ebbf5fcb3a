#pragma once

#include <stdexcept>
#include <string>

namespace mash {

// Precondition violations (caller bugs).
struct InvalidDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidShape : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidPartition : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MissingContext : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Data-dependent failures (legal calls on degenerate inputs).
struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CannotNormalize : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MitigationInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SweepAborted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mash
