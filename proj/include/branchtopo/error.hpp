#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace branchtopo {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Geometry

class DegenerateHull : public Error {
public:
    DegenerateHull() : Error("degenerate hull: fewer than 3 points or all points collinear") {}
    explicit DegenerateHull(const std::string& what) : Error(what) {}
};

class CollinearInput : public Error {
public:
    CollinearInput() : Error("collinear input: no circumcircle exists") {}
};

// Complexes and persistence

class TooLarge : public Error {
public:
    using Error::Error;
};

class NoDeathSimplex : public Error {
public:
    NoDeathSimplex() : Error("persistence pair has no death simplex (infinite bar)") {}
};

// Landscapes

class InfinitePair : public Error {
public:
    InfinitePair() : Error("landscape requires a diagram without infinite pairs") {}
};

class SeparationTooSmall : public Error {
public:
    using Error::Error;
};

class ParameterMismatch : public Error {
public:
    using Error::Error;
};

// Input / output

/// `line` is 1-based for text formats; `byte_offset` locates errors in binary
/// data. Either is zero when unknown.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0, std::size_t byte_offset = 0)
        : Error(what), line_(line), byte_offset_(byte_offset) {}

    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t line_;
    std::size_t byte_offset_;
};

class EmptyCloud : public Error {
public:
    EmptyCloud() : Error("empty point cloud: no foreground points") {}
};

class IoError : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

}  // namespace branchtopo
