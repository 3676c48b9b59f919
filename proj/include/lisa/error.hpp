#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lisa {

enum class ErrorCode {
    InvalidPoint,
    NotOnCurve,
    InvalidProfile,
    PayloadTooWide,
    ValueOutOfRange,
    DuplicateIdentity,
    ReconstructionMismatch,
    UnknownCredential,
    TimestampExpired,
    ReplayDetected,
    KeyMismatch,
    AuthTagMismatch,
    MalformedMessage,
    ScenarioDeadlock,
    InvalidState,
    InvalidConfig,
    IoFailure,
};

/// Upper-snake name used on the CLI and in traces, e.g. "TIMESTAMP_EXPIRED".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    explicit Error(ErrorCode code, const std::string& detail = {});

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

} // namespace lisa
