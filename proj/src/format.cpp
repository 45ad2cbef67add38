#include "sqzmetro/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "sqzmetro/errors.hpp"

namespace sqzmetro {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string format_double(double x) {
  if (x == 0.0) return "0";  // also folds -0
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), end);
}

std::string format_list(std::span<const double> xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  return out;
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find_first_of(", \t\r\n", pos);
    const auto token = trim(text.substr(pos, next == std::string_view::npos ? text.npos : next - pos));
    if (!token.empty()) out.push_back(parse_double(token));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace sqzmetro
