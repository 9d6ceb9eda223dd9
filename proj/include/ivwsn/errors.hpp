#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ivwsn {

/// Base of all toolkit errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad or contradictory configuration (unknown key, out-of-range constant).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Malformed input data. `row` is 1-based (header = row 1), 0 if not row-bound.
class ParseFail : public Error {
  public:
    explicit ParseFail(const std::string& msg, std::size_t row = 0)
        : Error(row ? msg + " (row " + std::to_string(row) + ")" : msg), row_(row) {}
    std::size_t row() const { return row_; }

  private:
    std::size_t row_;
};

class NonMonotonicTime : public ParseFail {
  public:
    using ParseFail::ParseFail;
};

class ExcessiveJitter : public ParseFail {
  public:
    using ParseFail::ParseFail;
};

class DistanceBelowReference : public Error {
  public:
    using Error::Error;
};

class MissingTableEntry : public Error {
  public:
    using Error::Error;
};

class MissingModel : public Error {
  public:
    using Error::Error;
};

class NonUniformTrace : public Error {
  public:
    using Error::Error;
};

class UnstableIntegration : public Error {
  public:
    using Error::Error;
};

class TimestampMismatch : public Error {
  public:
    using Error::Error;
};

class EmptySeries : public Error {
  public:
    using Error::Error;
};

class NoLinksForCompartment : public Error {
  public:
    using Error::Error;
};

}  // namespace ivwsn
