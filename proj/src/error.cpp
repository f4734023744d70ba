#include "lscp/error.hpp"

namespace lscp {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::DomainGuardViolation: return "DomainGuardViolation";
        case ErrorCode::InvalidShape: return "InvalidShape";
        case ErrorCode::UnstableCoefficient: return "UnstableCoefficient";
        case ErrorCode::InvalidBandwidth: return "InvalidBandwidth";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::ConfigInfeasible: return "ConfigInfeasible";
        case ErrorCode::InvalidLevel: return "InvalidLevel";
        case ErrorCode::InvalidOffset: return "InvalidOffset";
        case ErrorCode::NonPositivePrice: return "NonPositivePrice";
        case ErrorCode::InvalidGamma: return "InvalidGamma";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    }
    return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message, std::optional<std::size_t> index) {
    std::string out(to_string(code));
    out += ": ";
    out += message;
    if (index) {
        out += " (index " + std::to_string(*index) + ")";
    }
    return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index)
    : std::runtime_error(compose(code, message, index)), code_(code), index_(index) {}

Error::Error(ErrorCode code, std::string full_message, std::optional<std::size_t> index, bool)
    : std::runtime_error(full_message), code_(code), index_(index) {}

Error Error::with_context(std::string_view context) const {
    std::string msg(context);
    msg += ": ";
    msg += what();
    return Error(code_, std::move(msg), index_, true);
}

}  // namespace lscp
