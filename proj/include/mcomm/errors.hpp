#pragma once

#include <stdexcept>
#include <string>

namespace mcomm {

/// Bad user input: parameters, indices, config fields. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Model or solver failure: no stationary state, singular resolvent,
/// negative propensity. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace mcomm
