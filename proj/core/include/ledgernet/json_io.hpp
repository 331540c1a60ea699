#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ledgernet/amount.hpp"

namespace ledgernet {

using Json = nlohmann::json;

/// Parses JSON text, keeping integer literals wider than 64 bits as digit
/// strings instead of lossy doubles. Throws ParseError carrying the byte
/// offset of a syntax error.
Json parse_json(std::string_view text, std::size_t line = 0);

/// Accepts an unsigned JSON integer or a string of decimal digits.
std::optional<Amount> amount_from_json(const Json& value);

/// Unsigned JSON number when it fits, otherwise the decimal string.
Json amount_to_json(Amount amount);

/// JSON string literal for `s`, including the quotes.
std::string quote_json(std::string_view s);

std::string read_file(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`, so
/// readers see either the old or the new file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace ledgernet
