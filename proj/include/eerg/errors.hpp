#pragma once

#include <stdexcept>
#include <string>

namespace eerg {

// Every failure surfaced by the toolkit carries one of these codes so
// callers (and the CLI) can react without string-matching messages.
enum class ErrorCode {
    OrderMismatch,
    InvalidLabel,
    InvalidOrder,
    ChainTooLong,
    UnknownEntity,
    EmptySegment,
    ParseError,
    ValidationError,
    AmbientMissing,
    UnknownChain,
    RegistryMismatch,
    RegistryFrozen,
    SpecError,
    IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace eerg
