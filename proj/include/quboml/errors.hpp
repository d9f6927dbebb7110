#ifndef QUBOML_ERRORS_HPP
#define QUBOML_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quboml {

// Thrown for malformed or unusable input data (files, datasets, labels).
// The CLI maps this family to exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when an operation's preconditions are violated (shape mismatch,
// invalid constraint parameters, degenerate models).
struct InvalidArgument : std::invalid_argument {
    explicit InvalidArgument(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace quboml

#endif
