#pragma once

#include <stdexcept>
#include <string>

namespace glerg {

enum class ErrorKind {
    Overflow,
    BasisMismatch,
    UnsupportedProduct,
    RefinementBudgetExceeded,
    NotIntegerValued,
    RangeEstimateUnstable,
    PieceExplosion,
    PointOnNoPiece,
    CutoffExceeded,
    NoInteriorPiece,
    ComplexityRefusal,
    NonMonotoneWeight,
    UnboundedRequired,
    HypothesisFailed,
    NonCommuting,
    SyntaxError,
    UnknownName,
    InvalidArgument,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind k, const std::string& what)
        : std::runtime_error(std::string(kind_name(k)) + ": " + what), kind_(k) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// parse errors carry a source location (1-based)
class SyntaxError : public Error {
public:
    SyntaxError(int line, int col, const std::string& expected)
        : Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ", col " +
                                            std::to_string(col) + ": expected " + expected),
          line(line), col(col), expected(expected) {}

    int line;
    int col;
    std::string expected;
};

} // namespace glerg
