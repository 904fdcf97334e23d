#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace footgpt {

// Base for every error the engine raises. Subtypes map to CLI exit codes:
// ConfigError -> 2, ParseError/IntegrityError/EmptyDatasetError -> 3,
// TransportError -> 4, everything else -> 5.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside an operation's domain (bad rank, coordinate out of range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed input document. byte_offset() is 0 when the failure is semantic
// (missing/ill-typed field) rather than positional.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t byte_offset = 0)
        : Error(msg), byte_offset_(byte_offset) {}
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

class IntegrityError : public Error {
public:
    using Error::Error;
};

class EmptyDatasetError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// A mention matched more than one team; candidates() lists them.
class AmbiguityError : public Error {
public:
    AmbiguityError(const std::string& msg, std::vector<std::string> candidates)
        : Error(msg), candidates_(std::move(candidates)) {}
    const std::vector<std::string>& candidates() const { return candidates_; }

private:
    std::vector<std::string> candidates_;
};

class UnsupportedQuestionError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace footgpt
