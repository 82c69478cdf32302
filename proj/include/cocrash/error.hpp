#pragma once

#include <stdexcept>
#include <string>

namespace cocrash {

// Error taxonomy used across the library. The CLI maps any of these to a
// stage-named exit code; tests match on the concrete type.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t line_number)
        : Error(msg + " (line " + std::to_string(line_number) + ")"), line(line_number) {}
    std::size_t line;
};

class DataError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class LookupError : public Error {
  public:
    using Error::Error;
};

class RangeError : public Error {
  public:
    using Error::Error;
};

class PlanError : public Error {
  public:
    using Error::Error;
};

}  // namespace cocrash
