#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lscp {

enum class ErrorCode {
    InvalidArgument,
    SeriesTooShort,
    DomainGuardViolation,
    InvalidShape,
    UnstableCoefficient,
    InvalidBandwidth,
    ShapeMismatch,
    ConfigInfeasible,
    InvalidLevel,
    InvalidOffset,
    NonPositivePrice,
    InvalidGamma,
    ParseError,
    SchemaMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. Carries a machine-readable code and, where the
/// failure is tied to a position in a series or file, the offending index.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<std::size_t> index = std::nullopt);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] std::optional<std::size_t> index() const noexcept { return index_; }

    /// Same code and index, message prefixed with `context: `.
    [[nodiscard]] Error with_context(std::string_view context) const;

private:
    Error(ErrorCode code, std::string full_message, std::optional<std::size_t> index, bool);

    ErrorCode code_;
    std::optional<std::size_t> index_;
};

}  // namespace lscp
