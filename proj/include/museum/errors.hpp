#pragma once

#include <stdexcept>
#include <string>

namespace museum {

// Error categories map to CLI exit codes: validation/usage errors exit 2,
// store I/O errors exit 3.
enum class ErrorKind {
    DecodeFailure,
    EmptyDocument,
    ParseError,
    SelfSynonym,
    EmptyQuery,
    NoSegments,
    UrlMismatch,
    NonMonotonicTimestamp,
    NotFound,
    Validation,
    StoreIo,
};

class EngineError : public std::runtime_error {
public:
    EngineError(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    bool is_store_io() const { return kind_ == ErrorKind::StoreIo; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DecodeFailure: return "DecodeFailure";
        case ErrorKind::EmptyDocument: return "EmptyDocument";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SelfSynonym: return "SelfSynonym";
        case ErrorKind::EmptyQuery: return "EmptyQuery";
        case ErrorKind::NoSegments: return "NoSegments";
        case ErrorKind::UrlMismatch: return "UrlMismatch";
        case ErrorKind::NonMonotonicTimestamp: return "NonMonotonicTimestamp";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::Validation: return "Validation";
        case ErrorKind::StoreIo: return "StoreIo";
    }
    return "Unknown";
}

}  // namespace museum
