#pragma once

#include <stdexcept>
#include <string>

namespace propcalc {

// malformed or invalid input data; CLI maps this to exit code 2
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// a mathematical check failed (nonzero defect, degenerate form, broken
// invariant); CLI maps this to exit code 1
struct math_error : std::runtime_error {
    explicit math_error(const std::string& msg) : std::runtime_error(msg) {}
};

// a configured size/time bound was exceeded; CLI maps this to exit code 3
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace propcalc
