#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace altersim {

// Fixed-point formatting, "%.<decimals>f". Canonical serializations pin their
// decimal count so exports are byte-stable.
std::string format_fixed(double v, int decimals);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split_lines(std::string_view s);

std::string to_lower(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);

// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string_view text, std::string_view from, std::string_view to);

// Whitespace canonicalization used before hashing chat content: CRLF to LF,
// trailing spaces/tabs stripped per line, trailing newlines stripped at end.
std::string canonicalize_whitespace(std::string_view text);

} // namespace altersim
