#pragma once

#include <stdexcept>
#include <string>

namespace relspec {

enum class ErrorCode {
    UnknownDevelopment,
    DevelopmentNotPresent,
    UnknownRelease,
    ConflictingAlias,
    InvalidLexicon,
    InvalidRegistry,
    InvalidConfig,
    InvalidIndex,
    InvalidIdentifier,
};

const char* to_string(ErrorCode code);

/// Error raised by library operations; parse problems are reported as values instead.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace relspec
