#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "rankmoments/errors.hpp"
#include "rankmoments/moments.hpp"
#include "rankmoments/random.hpp"

using namespace rankmoments;

// Known-answer vectors published with the Random123 reference code.
TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::counter_type;
  CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("stream layout") {
  Philox4x32 g(0x299f31d0a4093822ULL, 0x85a308d3, 0x13198a2e, 0x03707344);
  // the first block is counter {0, s1, s2, s3}
  const auto b0 = Philox4x32::block({0, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  const auto b1 = Philox4x32::block({1, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  for (auto v : b0) CHECK(g() == v);
  for (auto v : b1) CHECK(g() == v);
}

TEST_CASE("determinism and stream separation") {
  Philox4x32 a(7, 1, 2, 3), b(7, 1, 2, 3), c(7, 1, 2, 4), d(8, 1, 2, 3);
  std::set<std::uint32_t> seen;
  bool differ_c = false, differ_d = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    differ_c = differ_c || x != c();
    differ_d = differ_d || x != d();
    seen.insert(x);
  }
  CHECK(differ_c);
  CHECK(differ_d);
  CHECK(seen.size() > 990);
}

TEST_CASE("uniformity of the normal draws") {
  Philox4x32 g(42);
  std::normal_distribution<double> z;
  Moments m;
  for (int i = 0; i < 200000; ++i) m.add(z(g));
  CHECK(std::abs(m.mean()) < 4 * m.se_mean());
  CHECK(std::abs(m.variance() - 1.0) < 4 * m.se_variance());
  CHECK(m.moment(4) / (m.variance() * m.variance()) == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("seed parsing") {
  CHECK(parse_seed("0") == 0);
  CHECK(parse_seed("18446744073709551615") == 18446744073709551615ULL);
  CHECK(parse_seed("0x1F") == 31);
  CHECK_THROWS_AS(parse_seed(""), SeedError);
  CHECK_THROWS_AS(parse_seed("-1"), SeedError);
  CHECK_THROWS_AS(parse_seed("12a"), SeedError);
  CHECK_THROWS_AS(parse_seed("18446744073709551616"), SeedError);
}
