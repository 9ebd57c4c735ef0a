#ifndef CFIE_ERRORS_HPP
#define CFIE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfie {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problems with user-supplied input (files, flags, mismatched reports).
// The CLI maps these to exit code 2.
class InputError : public Error {
public:
    using Error::Error;
};

// View payload is structurally wrong: missing field, wrong JSON shape,
// invalid label, unknown field in strict mode.
class SchemaError : public InputError {
public:
    using InputError::InputError;
};

// A type string does not conform to the descriptor grammar.
class TypeGrammarError : public InputError {
public:
    TypeGrammarError(const std::string& message, std::size_t offset)
        : InputError(message), offset_(offset) {}

    // Byte offset of the first offending character within the type string.
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// An id or link key violates a uniqueness constraint.
class DuplicateIdError : public InputError {
public:
    using InputError::InputError;
};

// Two target maps fed to a comparison were built under different policies.
class PolicyMismatchError : public InputError {
public:
    using InputError::InputError;
};

// A target map does not belong to the views of the matched program.
class ViewMismatchError : public InputError {
public:
    using InputError::InputError;
};

class DivisionByZeroError : public InputError {
public:
    using InputError::InputError;
};

// Internal consistency failure. The CLI maps these to exit code 3.
class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace cfie

#endif
