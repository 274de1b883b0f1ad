#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace planetary::text {

// Byte offset of the first invalid UTF-8 sequence, or nullopt if `s` is valid.
std::optional<std::size_t> find_invalid_utf8(std::string_view s);

std::string normalize_newlines(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string_view trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

// Repository-relative path check: non-empty, `/` separated, no empty, `.` or
// `..` segments, no leading slash, no backslashes or control characters.
bool is_valid_repo_path(std::string_view path);

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

std::string xml_escape(std::string_view s);

}  // namespace planetary::text
