#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypfred {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Character outside the expression alphabet, or a malformed number.
class LexError : public Error {
public:
    LexError(std::size_t offset, const std::string& what)
        : Error("lex error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::string expected)
        : Error("parse error at offset " + std::to_string(offset) + ": expected " + expected),
          offset_(offset), expected_(std::move(expected)) {}
    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class DiffError : public Error {
public:
    using Error::Error;
};

/// Index or coordinate outside its admissible range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Characteristic tracing hit a degenerate speed.
class TraceError : public Error {
public:
    using Error::Error;
};

/// Problem data violates a structural or analytic precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class SpectrumError : public Error {
public:
    using Error::Error;
};

} // namespace hypfred
