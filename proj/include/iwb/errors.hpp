#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iwb {

enum class ErrorKind {
    InvalidArgument,
    PrecisionLoss,
    PrecisionInsufficient,
    TruncationInsufficient,
    BadReduction,
    Resource,
    IsolationFailure,
    UnsupportedHypothesis,
    NotPseudoNull,
    UnsupportedShape,
    Inconclusive,
    Parse,
    Internal,
};

inline std::string_view to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::PrecisionLoss: return "precision-loss";
        case ErrorKind::PrecisionInsufficient: return "precision-insufficient";
        case ErrorKind::TruncationInsufficient: return "truncation-insufficient";
        case ErrorKind::BadReduction: return "bad-reduction";
        case ErrorKind::Resource: return "resource";
        case ErrorKind::IsolationFailure: return "isolation-failure";
        case ErrorKind::UnsupportedHypothesis: return "unsupported-hypothesis";
        case ErrorKind::NotPseudoNull: return "not-pseudo-null";
        case ErrorKind::UnsupportedShape: return "unsupported-shape";
        case ErrorKind::Inconclusive: return "inconclusive";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Internal: return "internal";
    }
    return "unknown";
}

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Input errors map to exit status 2, everything else to 1.
    bool is_input_error() const noexcept {
        return kind_ == ErrorKind::InvalidArgument || kind_ == ErrorKind::Parse;
    }

   private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

}  // namespace iwb
