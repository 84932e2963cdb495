#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace screenlab {

enum class ErrorCode {
    InvalidConfig,
    DegenerateAssignment,
    InvalidRetention,
    MissingTypes,
    MissingStatedTypes,
    EmptyScreen,
    EmptyArm,
    WeakFirstStage,
    AllCompliers,
    DegenerateBootstrap,
    AllDiscarded,
    SchemaError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace screenlab
