#pragma once

#include <stdexcept>
#include <string>

namespace holevo {

// Invalid input: malformed priors, non-Hermitian or non-PSD matrices,
// out-of-range parameters, unparsable files.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed to converge (eigensolver sweep cap,
// optimizer that never reaches its stopping rule).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace holevo
