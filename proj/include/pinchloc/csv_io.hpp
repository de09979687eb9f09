#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pinchloc/channel.hpp"

namespace pinchloc {

/// Shortest form that round-trips: "%.17g", with "inf"/"-inf"/"nan".
std::string format_double(double value);

/// Strict full-string parse (accepts "inf"). Throws std::invalid_argument.
double parse_double(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Observation file: header "n,re,im" then one row per antenna, n one-based.
std::string observation_csv(std::span<const Complex> samples);
SignalVector parse_observation_csv(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace pinchloc
