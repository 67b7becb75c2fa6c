#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmsent {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid options, hyperparameters or configuration files.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Input data that violates a documented format or precondition.
class DataError : public Error {
public:
    using Error::Error;
};

// A text-format violation with its 1-based line number.
class ParseError : public DataError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : DataError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Model file written by an incompatible format version.
class VersionError : public DataError {
public:
    using DataError::DataError;
};

// Model file that is truncated, fails its checksum or does not parse.
class CorruptFileError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace cmsent
