#pragma once

#include <stdexcept>
#include <string>

namespace osvd {

// Invalid arguments, shapes, or rank parameters.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A dense solver failed to converge or produced an unusable result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace osvd
