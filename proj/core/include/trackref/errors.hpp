#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trackref {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid hyperparameter or scenario parameter.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A vector with (near-)zero L2 norm cannot be normalized.
class ZeroVectorError : public Error {
public:
    using Error::Error;
};

/// Two embeddings (or feature sums) of different dimension were combined.
class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

/// Malformed line in a tracking results file. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Bounding box with width or height <= 0.
class NonPositiveSizeError : public Error {
public:
    using Error::Error;
};

/// Embedding file does not start with the expected magic bytes.
class BadMagicError : public Error {
public:
    using Error::Error;
};

/// Embedding file declares a format version this reader does not support.
class UnsupportedVersionError : public Error {
public:
    using Error::Error;
};

/// Embedding file length does not match its declared header.
class TruncatedFileError : public Error {
public:
    using Error::Error;
};

/// Tracking rows and embedding rows differ in count.
class CountMismatchError : public Error {
public:
    using Error::Error;
};

/// Two tracking rows share the same (frame, id) pair.
class DuplicateFramePerIdError : public Error {
public:
    using Error::Error;
};

/// Attempted to merge two tracklets that both have a box on the same frame.
class MergeConflictError : public Error {
public:
    using Error::Error;
};

/// Prototype packing for a synthetic scenario failed.
class InfeasibleGeometryError : public Error {
public:
    using Error::Error;
};

/// Identity swaps were requested but no two tracklets ever coexist.
class NoEligiblePairError : public Error {
public:
    using Error::Error;
};

}  // namespace trackref
