#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ng {

// --- UTF-8 -------------------------------------------------------------

// Decodes one codepoint starting at byte offset i. Returns the codepoint and
// advances i past it, or returns nullopt on malformed input (i unchanged).
std::optional<char32_t> utf8_decode(std::string_view s, std::size_t& i);

bool utf8_valid(std::string_view s);

void utf8_append(std::string& out, char32_t cp);

// Case folding for the Latin ranges that cover given-name corpora (ASCII,
// Latin-1 Supplement, Latin Extended-A). Input is expected to be NFC already;
// no normalization is attempted here.
std::string fold_case(std::string_view s);

bool is_space_cp(char32_t cp);
bool is_word_cp(char32_t cp);

// --- number formatting / parsing (locale independent) -------------------

std::string format_double(double v);
std::string format_int(std::int64_t v);

// Parses a full string as a number; returns nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

// --- misc ---------------------------------------------------------------

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

// Strips one trailing '\r' (TSV files may arrive with CRLF endings).
std::string_view chomp_cr(std::string_view line);

// ISO-8601 timestamp ("2012-03-06", "2012-03-06T14:05:09", optional
// fractional seconds and Z / +hh:mm offset) to epoch milliseconds.
std::optional<std::int64_t> parse_iso8601_ms(std::string_view s);

}  // namespace ng
