#include "rankmoments/grid.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "rankmoments/errors.hpp"

namespace rankmoments {

namespace {

constexpr double kSnap = 1e12;
constexpr std::size_t kMaxPoints = 1000000;

double snap(double v) { return std::round(v * kSnap) / kSnap; }

std::string normalize(std::string_view spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    // U+2212 MINUS SIGN is E2 88 92 in UTF-8.
    if (spec.substr(i, 3) == "\xE2\x88\x92") {
      out += '-';
      i += 2;
    } else if (spec[i] != ' ' && spec[i] != '\t') {
      out += spec[i];
    }
  }
  return out;
}

double number(std::string_view text, std::string_view whole) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ParseError("bad number '" + std::string(text) + "' in grid '" + std::string(whole) + "'");
  }
  return v;
}

// Splits "a(d)b" or the bracketed-endpoint form "(a)d(b)" into its three fields.
std::array<std::string_view, 3> fields(std::string_view item, std::string_view whole) {
  const auto unbalanced = [&] { return ParseError("unbalanced parentheses in grid '" + std::string(whole) + "'"); };
  if (item.front() == '(') {
    const auto c1 = item.find(')');
    const auto o2 = item.find('(', 1);
    if (c1 == std::string_view::npos || o2 == std::string_view::npos || o2 < c1 || item.back() != ')') {
      throw unbalanced();
    }
    return {item.substr(1, c1 - 1), item.substr(c1 + 1, o2 - c1 - 1), item.substr(o2 + 1, item.size() - o2 - 2)};
  }
  const auto open = item.find('(');
  const auto close = item.find(')', open);
  if (close == std::string_view::npos) throw unbalanced();
  return {item.substr(0, open), item.substr(open + 1, close - open - 1), item.substr(close + 1)};
}

void expand(std::string_view item, std::string_view whole, std::vector<double>& out) {
  if (item.find_first_of("()") == std::string_view::npos) {
    out.push_back(snap(number(item, whole)));
    return;
  }
  const auto f = fields(item, whole);
  const double a = number(f[0], whole);
  const double d = number(f[1], whole);
  const double b = number(f[2], whole);
  if (a == b) {
    out.push_back(snap(a));
    return;
  }
  if (d == 0.0 || (b - a) / d < 0.0) {
    throw ParseError("step in '" + std::string(item) + "' does not lead from start to stop");
  }
  const double steps = (b - a) / d;
  const double k = std::round(steps);
  if (std::abs(steps - k) > 1e-9 * std::max(1.0, k)) {
    throw ParseError("step in '" + std::string(item) + "' does not divide the range");
  }
  if (k + 1 > static_cast<double>(kMaxPoints)) throw ParseError("grid '" + std::string(whole) + "' is too long");
  const auto count = static_cast<std::size_t>(k);
  for (std::size_t i = 0; i <= count; ++i) out.push_back(snap(a + static_cast<double>(i) * d));
  out.back() = snap(b);
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  const std::string s = normalize(spec);
  if (s.empty()) throw ParseError("empty grid");
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    expand(std::string_view(s).substr(start, end - start), spec, out);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::int64_t> parse_count_list(std::string_view spec) {
  std::vector<std::int64_t> out;
  for (double v : parse_grid(spec)) {
    if (v < 1.0 || v != std::floor(v) || v > 1e15) {
      throw ParseError("'" + std::string(spec) + "' must list positive integers");
    }
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

}  // namespace rankmoments
