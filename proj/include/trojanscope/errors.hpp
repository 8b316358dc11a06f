#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trojanscope {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value (bad bandwidth, rate out of range, ...).
class ValueError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure (open, read, write).
class IoError : public Error {
public:
    using Error::Error;
};

/// Tensor container parse or lookup failure. `kind` identifies the check
/// that failed so callers (and tests) do not have to match message text.
class TensorFileError : public Error {
public:
    enum class Kind {
        HeaderLength,      // missing or implausible 8-byte header length
        HeaderJson,        // header bytes are not valid JSON
        HeaderField,       // entry is missing/has malformed dtype, shape or data_offsets
        UnsupportedDtype,  // dtype tag is not one this library can do math on
        Bounds,            // declared byte range leaves the payload
        Overlap,           // two tensors claim overlapping payload bytes
        MissingTensor,
        BadShape,          // not 2-D, no axis matches num_classes, bias length mismatch, ...
        AmbiguousAxis,     // both axes equal num_classes and no class-axis flag given
        NonFinite,         // NaN or Inf in loaded values
    };

    TensorFileError(Kind kind, const std::string& message) : Error(message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Malformed line in a JSONL stream; carries the 1-based line number.
class JsonlError : public Error {
public:
    JsonlError(std::size_t line_no, const std::string& message)
        : Error("line " + std::to_string(line_no) + ": " + message), line_no_(line_no) {}

    std::size_t line_no() const { return line_no_; }

private:
    std::size_t line_no_;
};

}  // namespace trojanscope
