#include "lisa/error.hpp"

namespace lisa {

std::string_view to_string(ErrorCode code) noexcept {
    switch(code) {
        case ErrorCode::InvalidPoint: return "INVALID_POINT";
        case ErrorCode::NotOnCurve: return "NOT_ON_CURVE";
        case ErrorCode::InvalidProfile: return "INVALID_PROFILE";
        case ErrorCode::PayloadTooWide: return "PAYLOAD_TOO_WIDE";
        case ErrorCode::ValueOutOfRange: return "VALUE_OUT_OF_RANGE";
        case ErrorCode::DuplicateIdentity: return "DUPLICATE_IDENTITY";
        case ErrorCode::ReconstructionMismatch: return "RECONSTRUCTION_MISMATCH";
        case ErrorCode::UnknownCredential: return "UNKNOWN_CREDENTIAL";
        case ErrorCode::TimestampExpired: return "TIMESTAMP_EXPIRED";
        case ErrorCode::ReplayDetected: return "REPLAY_DETECTED";
        case ErrorCode::KeyMismatch: return "KEY_MISMATCH";
        case ErrorCode::AuthTagMismatch: return "AUTH_TAG_MISMATCH";
        case ErrorCode::MalformedMessage: return "MALFORMED_MESSAGE";
        case ErrorCode::ScenarioDeadlock: return "SCENARIO_DEADLOCK";
        case ErrorCode::InvalidState: return "INVALID_STATE";
        case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
        case ErrorCode::IoFailure: return "IO_FAILURE";
    }
    return "UNKNOWN";
}

namespace {

std::string format(ErrorCode code, const std::string& detail) {
    std::string msg{to_string(code)};
    if(!detail.empty()) {
        msg += ": ";
        msg += detail;
    }
    return msg;
}

} // namespace

Error::Error(ErrorCode code, const std::string& detail) : std::runtime_error(format(code, detail)), code_(code) {}

} // namespace lisa
