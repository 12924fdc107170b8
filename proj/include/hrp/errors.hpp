#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hrp {

/// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments, mismatched inputs, or violated preconditions.
class UsageError : public Error {
public:
    using Error::Error;
};

/// A line of an input file could not be parsed under a strict policy.
class IngestError : public Error {
public:
    IngestError(std::size_t line_number, const std::string& detail, const std::string& source = {})
        : Error((source.empty() ? std::string{} : source + ": ") + "line " + std::to_string(line_number) + ": " +
                detail),
          line_(line_number),
          detail_(detail) {}

    std::size_t line_number() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

/// A file could not be opened, read, or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hrp
