#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the file formats.
namespace kants::text {

std::string_view trim(std::string_view s);

/// Split on commas, trimming blanks around each field.
std::vector<std::string_view> split_fields(std::string_view line);

/// Whole-field parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Fixed two-decimal rendering used for accuracies ("98.67").
std::string format_percent(double v);

/// Split text into lines, dropping '\r' and a trailing empty line.
std::vector<std::string_view> lines(std::string_view text);
/// The views point into the argument, so temporaries are rejected.
std::vector<std::string_view> lines(std::string&& text) = delete;

std::string read_file(const std::string& path);

} // namespace kants::text
