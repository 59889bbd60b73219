#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kpf {

// Machine-readable failure reasons. The CLI reports these verbatim.
enum class ErrorCode {
    ring_mismatch,
    non_zero_mean,
    not_a_unit,
    unsupported_ring,
    insufficient_depth,
    order_violation,
    not_invertible_at_zero,
    predicate_violation,
    truncation_mismatch,
    insufficient_kmax,
    parse_error,
    config_error,
};

constexpr std::string_view to_string(ErrorCode c)
{
    switch (c) {
    case ErrorCode::ring_mismatch: return "RingMismatch";
    case ErrorCode::non_zero_mean: return "NonZeroMean";
    case ErrorCode::not_a_unit: return "NotAUnit";
    case ErrorCode::unsupported_ring: return "UnsupportedRing";
    case ErrorCode::insufficient_depth: return "InsufficientDepth";
    case ErrorCode::order_violation: return "OrderViolation";
    case ErrorCode::not_invertible_at_zero: return "NotInvertibleAtZero";
    case ErrorCode::predicate_violation: return "PredicateViolation";
    case ErrorCode::truncation_mismatch: return "TruncationMismatch";
    case ErrorCode::insufficient_kmax: return "InsufficientKMax";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::config_error: return "ConfigError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace kpf
