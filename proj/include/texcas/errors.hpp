#pragma once

#include <stdexcept>
#include <string>

namespace texcas {

// Root of the library's exception hierarchy.
class TexcasError : public std::runtime_error {
public:
    explicit TexcasError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input (LaTeX or CAS text, translation patterns).
class ParseError : public TexcasError {
public:
    ParseError(const std::string& msg, std::size_t position)
        : TexcasError(msg + " (at position " + std::to_string(position) + ")"),
          position_(position) {}
    explicit ParseError(const std::string& msg) : TexcasError(msg), position_(0) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Problems reading or validating external data files (lexicon, corpus).
class LoadError : public TexcasError {
public:
    using TexcasError::TexcasError;
};

// Structurally valid input that cannot be mapped to the target system.
class TranslationError : public TexcasError {
public:
    using TexcasError::TexcasError;
};

// Numeric evaluation failures: poles, domain violations, unknown functions.
class EvalError : public TexcasError {
public:
    using TexcasError::TexcasError;
};

// Bad tool configuration: unknown options, unusable files, empty sample regions.
class ConfigError : public TexcasError {
public:
    using TexcasError::TexcasError;
};

} // namespace texcas
