#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace slf {

// Base of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated precondition or out-of-range parameter.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Malformed file contents. Carries the byte offset where parsing failed.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t byte_offset)
        : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

// Failure to open, read, or write a file.
class IoError : public Error {
public:
    using Error::Error;
};

// Phantom placement could not satisfy its constraints within the retry budget.
class GenerationError : public Error {
public:
    using Error::Error;
};

// Pearson correlation is undefined (fewer than two samples or zero variance).
class UndefinedCorrelation : public Error {
public:
    using Error::Error;
};

// One or more expected view mask files are absent. Carries the missing keys.
class MissingViews : public Error {
public:
    MissingViews(const std::string& what, std::vector<std::string> keys)
        : Error(what), keys_(std::move(keys)) {}

    const std::vector<std::string>& keys() const { return keys_; }

private:
    std::vector<std::string> keys_;
};

}  // namespace slf
