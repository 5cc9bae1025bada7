#pragma once

// Grid notation "start(step)stop" for lists of correlation values, e.g.
// "0(0.01)1" or, with bracketed endpoints, "(-1)0.1(1)". Comma-separated
// items may mix ranges and single values ("-0.9(0.3)0.9,0.95"). The Unicode
// minus sign is accepted.

#include <cstdint>
#include <string_view>
#include <vector>

namespace rankmoments {

/// Values are snapped to 12 decimals so that "0(0.01)1" yields the same
/// doubles as the literals 0.01, 0.02, ... Throws ParseError.
std::vector<double> parse_grid(std::string_view spec);

/// Comma-separated positive integers, or a range "10(10)40". Throws ParseError.
std::vector<std::int64_t> parse_count_list(std::string_view spec);

}  // namespace rankmoments
