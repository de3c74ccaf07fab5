#pragma once

#include <stdexcept>
#include <string>

namespace metarelay {

// Base error for configuration and invariant violations.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A protocol step declined to run (bad precondition, invalid proof, ...).
// Refusals are terminal for the transfer that triggered them.
class RefusalError : public Error {
public:
    explicit RefusalError(const std::string& msg) : Error(msg) {}
};

// Malformed wire bytes. Reported distinctly from verification failures.
class EncodingError : public Error {
public:
    explicit EncodingError(const std::string& msg) : Error(msg) {}
};

} // namespace metarelay
