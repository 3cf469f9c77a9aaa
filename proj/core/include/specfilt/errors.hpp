#pragma once

#include <stdexcept>
#include <string>

namespace specfilt {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimension mismatch between two values (sequence vs. filter, matrix vs. vector).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid values: non-finite entries, zero dimensions, malformed files.
class DataError : public Error {
public:
    using Error::Error;
};

/// Malformed band specification text.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A band name that does not exist in the scheme it is resolved against.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Frequency index outside [0, n-1].
class IndexError : public Error {
public:
    using Error::Error;
};

/// Sequence length too short for the requested band scheme.
class UnsupportedLengthError : public Error {
public:
    using Error::Error;
};

/// Numerically degenerate input: zero-norm cosine operand or zero direction.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

enum class IoErrorKind {
    bad_magic,
    bad_version,
    zero_dimension,
    truncated,
    trailing_data,
    non_finite,
    schema,
    file,
};

/// File/byte-level failure with a machine-checkable kind.
class IoError : public DataError {
public:
    IoError(IoErrorKind kind, const std::string& message)
        : DataError(message), kind_(kind) {}

    IoErrorKind kind() const noexcept { return kind_; }

private:
    IoErrorKind kind_;
};

}  // namespace specfilt
