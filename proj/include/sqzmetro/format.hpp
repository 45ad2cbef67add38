#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sqzmetro {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

/// Comma-joined shortest round-trip representation.
std::string format_list(std::span<const double> xs);

/// Parses a comma- or whitespace-separated list of doubles.
/// Throws ValidationError on malformed entries.
std::vector<double> parse_list(std::string_view text);

/// Parses one double, rejecting trailing garbage.
double parse_double(std::string_view text);

}  // namespace sqzmetro
