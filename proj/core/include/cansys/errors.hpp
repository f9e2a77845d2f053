#pragma once

#include <stdexcept>
#include <string>

namespace cansys {

/// Malformed or out-of-contract input (bad spec, bad parameters).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that could not meet its accuracy or convergence target.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cansys
