#pragma once

#include <stdexcept>
#include <string>

namespace drdf {

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when K + jitter*I cannot be factored even at the largest jitter.
/// Usually means duplicated inputs carrying different observations.
class SingularKernel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The objective returned a non-finite value.
class EvaluationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace drdf
