#pragma once

#include <stdexcept>
#include <string>

namespace bcp {

/// Error categories surfaced by the library. The CLI maps them to exit codes.
enum class ErrorKind {
    InvalidArgument,    ///< malformed or out-of-range argument
    ParseError,         ///< boundary expression syntax error
    StartOutsideBand,   ///< starting point not strictly inside the band
    InvalidBoundaries,  ///< boundary/band violates ordering, jump or sign rules
    EvaluationError,    ///< boundary evaluator produced NaN or a non-finite value
    NumericFailure,     ///< quadrature or root finding did not converge
    InvalidDomain,      ///< coefficient outside its admissible domain
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by boundary evaluation; carries the offending time.
class EvaluationError : public Error {
public:
    EvaluationError(double t, const std::string& what)
        : Error(ErrorKind::EvaluationError, what), time_(t) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Raised by the expression parser; carries the byte offset of the problem.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : Error(ErrorKind::ParseError, what), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

}  // namespace bcp
