#pragma once

#include <stdexcept>
#include <string>

namespace prefdyn {

// Base for everything the library throws on bad data. Code is a stable
// machine-readable tag (also what the CLI prints before the message).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Matrix / simplex validation failures (exit code 2 territory).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Numeric failures: solver stalls, underflow, non-convergence (exit code 3).
class NumericError : public Error {
public:
    using Error::Error;
};

inline ValidationError diagonal_not_half(int i) {
    return ValidationError("DiagonalNotHalf", "p[" + std::to_string(i) + "][" + std::to_string(i) + "] != 1/2");
}
inline ValidationError row_column_sum_violation(int i, int j) {
    return ValidationError("RowColumnSumViolation",
                           "p[" + std::to_string(i) + "][" + std::to_string(j) + "] + transpose != 1");
}
inline ValidationError entry_out_of_range(int i, int j) {
    return ValidationError("EntryOutOfRange",
                           "p[" + std::to_string(i) + "][" + std::to_string(j) + "] outside [0,1]");
}

} // namespace prefdyn
