#pragma once

// Shared output helpers: JSON text with 17 significant digits and a stable
// content hash.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace winding {

/// Serialises like nlohmann::json::dump but prints every floating-point
/// number with printf("%.17g"). Object keys keep nlohmann's sorted order.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// 64-bit FNV-1a of the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text);

/// 16 lowercase hex digits.
std::string hex64(std::uint64_t value);

/// printf("%.17g").
std::string format_double(double v);

} // namespace winding
