#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lobscale {

inline constexpr std::string_view kVersion = "0.1.0";

/// Invalid configuration or parameters supplied by the caller (CLI exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerically degenerate model state: collapsed distributions, nonconvergent
/// series, insufficient data for an estimator (CLI exit code 3).
struct degeneracy_error : std::runtime_error {
    explicit degeneracy_error(const std::string& what) : std::runtime_error(what) {}
};

struct insufficient_data_error : degeneracy_error {
    explicit insufficient_data_error(const std::string& what) : degeneracy_error(what) {}
};

}  // namespace lobscale
