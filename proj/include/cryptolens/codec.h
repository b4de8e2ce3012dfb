#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace cryptolens {

// Base64 with mandatory padding. Whitespace is skipped, as the Android
// decoder does; any other character outside the alphabet rejects the input.
std::optional<std::string> base64_decode(std::string_view text, bool url_safe);

// Padded standard alphabet. Used by the benchmark generator.
std::string base64_encode(std::string_view bytes);

std::string to_hex(std::string_view bytes);

}  // namespace cryptolens
