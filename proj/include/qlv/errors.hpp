// errors.hpp -- exception taxonomy; the CLI maps these onto its exit codes.
#pragma once

#include <stdexcept>

namespace qlv {

// bad inputs: shapes, ranges, malformed model files (exit 2)
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// size guards tripped (exit 4)
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a computed result failed its own quality checks (exit 3)
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qlv
