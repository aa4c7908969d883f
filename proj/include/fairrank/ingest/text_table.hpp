#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fairrank::ingest {

/// Splits on a single delimiter character, keeping empty fields.
std::vector<std::string_view> split_fields(std::string_view line, char delimiter);

/// Splits on runs of spaces and tabs, dropping empty fields.
std::vector<std::string_view> split_whitespace(std::string_view line);

/// Reads every line (without the trailing '\n' or '\r'). Throws IoError.
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes `content` atomically enough for our purposes (truncate + write).
/// Throws IoError.
void write_text(const std::filesystem::path& path, std::string_view content);

double parse_double(std::string_view text, const std::filesystem::path& path, std::size_t line);
long long parse_int(std::string_view text, const std::filesystem::path& path, std::size_t line);

/// Round-trip exact decimal form of a double.
std::string exact_decimal(double value);

/// Orders all-digit ids numerically and everything else lexicographically;
/// numeric ids sort before non-numeric ones.
struct NaturalLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const;
};

}  // namespace fairrank::ingest
