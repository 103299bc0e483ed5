#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bfmn {

// Canonical form for every word that enters the pipeline: lowercase
// (ASCII and Latin-1 accented letters), trimmed, internal whitespace runs
// collapsed to one space. Accents, apostrophes and n-grams are kept.
std::string normalize_word(std::string_view raw);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);

// One CSV row per element; RFC 4180 quoting, CRLF tolerated.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_escape(std::string_view field);

// Splits a resource line on tabs when present, otherwise on commas.
std::vector<std::string> split_resource_line(std::string_view line);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

// printf-style fixed-point formatting, locale independent.
std::string format_fixed(double value, int decimals);

} // namespace bfmn
